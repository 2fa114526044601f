/*
 * Copyright 2026 The Permnet Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>

#include "permnet/error.hpp"

namespace permnet {

template <typename T>
T load_le(std::span<const std::uint8_t> data, std::size_t pos) {
  T value = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    value |= static_cast<T>(static_cast<T>(data[pos + i]) << (8 * i));
  }
  return value;
}

/// Bounds-checked little-endian cursor. Every overrun throws with the error
/// code the owning format uses for truncation.
class ByteReader {
 public:
  ByteReader(std::span<const std::uint8_t> data, Errc overrun)
      : data_(data), overrun_(overrun) {}

  std::size_t position() const { return pos_; }
  std::size_t remaining() const { return data_.size() - pos_; }

  void seek(std::size_t pos) {
    if (pos > data_.size()) fail();
    pos_ = pos;
  }

  void skip(std::size_t n) {
    if (n > remaining()) fail();
    pos_ += n;
  }

  std::uint8_t u8() { return take<std::uint8_t>(); }
  std::uint16_t u16() { return take<std::uint16_t>(); }
  std::uint32_t u32() { return take<std::uint32_t>(); }
  std::uint64_t u64() { return take<std::uint64_t>(); }

  std::span<const std::uint8_t> bytes(std::size_t n) {
    if (n > remaining()) fail();
    auto out = data_.subspan(pos_, n);
    pos_ += n;
    return out;
  }

 private:
  template <typename T>
  T take() {
    if (sizeof(T) > remaining()) fail();
    T value = load_le<T>(data_, pos_);
    pos_ += sizeof(T);
    return value;
  }

  [[noreturn]] void fail() const { throw Error(overrun_, "read past end of data"); }

  std::span<const std::uint8_t> data_;
  std::size_t pos_ = 0;
  Errc overrun_;
};

}  // namespace permnet
