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

// Android binary XML ("AXML") decoder.
//
// Layout: a file chunk (type 0x0003) wrapping a sequence of chunks, each
// starting with {u16 type, u16 header_size, u32 size}. The first must be the
// string pool; element and namespace nodes refer to strings by index.

#include <bit>
#include <cstdio>
#include <optional>

#include "byte_reader.hpp"
#include "permnet/error.hpp"
#include "permnet/manifest.hpp"

namespace permnet {

namespace {

constexpr std::uint16_t kXmlType = 0x0003;
constexpr std::uint16_t kStringPoolType = 0x0001;
constexpr std::uint16_t kStartNamespaceType = 0x0100;
constexpr std::uint16_t kEndNamespaceType = 0x0101;
constexpr std::uint16_t kStartElementType = 0x0102;
constexpr std::uint16_t kEndElementType = 0x0103;
constexpr std::uint16_t kResourceMapType = 0x0180;

constexpr std::uint32_t kUtf8Flag = 0x00000100;
constexpr std::uint32_t kNoIndex = 0xffffffff;

constexpr std::size_t kNodeHeaderSize = 16;
constexpr std::size_t kStringPoolHeaderSize = 28;
constexpr std::size_t kAttrExtSize = 20;
constexpr std::size_t kAttributeSize = 20;
constexpr std::size_t kMaxDepth = 4096;

// Res_value data types.
constexpr std::uint8_t kTypeNull = 0x00;
constexpr std::uint8_t kTypeReference = 0x01;
constexpr std::uint8_t kTypeString = 0x03;
constexpr std::uint8_t kTypeFloat = 0x04;
constexpr std::uint8_t kTypeIntDec = 0x10;
constexpr std::uint8_t kTypeIntHex = 0x11;
constexpr std::uint8_t kTypeBoolean = 0x12;

void append_utf8(std::string& out, std::uint32_t cp) {
  if (cp < 0x80) {
    out += static_cast<char>(cp);
  } else if (cp < 0x800) {
    out += static_cast<char>(0xc0 | (cp >> 6));
    out += static_cast<char>(0x80 | (cp & 0x3f));
  } else if (cp < 0x10000) {
    out += static_cast<char>(0xe0 | (cp >> 12));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3f));
    out += static_cast<char>(0x80 | (cp & 0x3f));
  } else {
    out += static_cast<char>(0xf0 | (cp >> 18));
    out += static_cast<char>(0x80 | ((cp >> 12) & 0x3f));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3f));
    out += static_cast<char>(0x80 | (cp & 0x3f));
  }
}

std::string decode_utf16(ByteReader& r) {
  std::uint32_t len = r.u16();
  if (len & 0x8000) {
    len = ((len & 0x7fff) << 16) | r.u16();
  }
  const auto raw = r.bytes(std::size_t{len} * 2);
  std::string out;
  out.reserve(len);
  for (std::size_t i = 0; i < len; ++i) {
    std::uint32_t unit = load_le<std::uint16_t>(raw, 2 * i);
    if (unit >= 0xd800 && unit < 0xdc00 && i + 1 < len) {
      const std::uint32_t low = load_le<std::uint16_t>(raw, 2 * (i + 1));
      if (low >= 0xdc00 && low < 0xe000) {
        append_utf8(out, 0x10000 + ((unit - 0xd800) << 10) + (low - 0xdc00));
        ++i;
        continue;
      }
    }
    if (unit >= 0xd800 && unit < 0xe000) unit = 0xfffd;
    append_utf8(out, unit);
  }
  return out;
}

std::size_t utf8_length_prefix(ByteReader& r) {
  std::size_t len = r.u8();
  if (len & 0x80) {
    len = ((len & 0x7f) << 8) | r.u8();
  }
  return len;
}

std::string decode_utf8(ByteReader& r) {
  utf8_length_prefix(r);  // UTF-16 length, unused
  const std::size_t bytes = utf8_length_prefix(r);
  const auto raw = r.bytes(bytes);
  return std::string(raw.begin(), raw.end());
}

std::vector<std::string> parse_string_pool(std::span<const std::uint8_t> chunk, std::size_t header_size) {
  if (header_size < kStringPoolHeaderSize) {
    throw Error(Errc::TruncatedChunk, "string pool header too small");
  }
  ByteReader r(chunk, Errc::TruncatedChunk);
  r.seek(8);
  const std::uint32_t string_count = r.u32();
  const std::uint32_t style_count = r.u32();
  const std::uint32_t flags = r.u32();
  const std::uint32_t strings_start = r.u32();
  r.u32();  // styles start

  const std::uint64_t index_bytes = (std::uint64_t{string_count} + style_count) * 4;
  if (header_size + index_bytes > chunk.size()) {
    throw Error(Errc::TruncatedChunk, "string pool offsets exceed chunk");
  }
  const bool utf8 = (flags & kUtf8Flag) != 0;

  std::vector<std::string> pool;
  pool.reserve(string_count);
  ByteReader offsets(chunk, Errc::TruncatedChunk);
  offsets.seek(header_size);
  for (std::uint32_t i = 0; i < string_count; ++i) {
    const std::uint64_t at = std::uint64_t{strings_start} + offsets.u32();
    if (at >= chunk.size()) {
      throw Error(Errc::TruncatedChunk, "string offset outside pool");
    }
    ByteReader s(chunk, Errc::TruncatedChunk);
    s.seek(static_cast<std::size_t>(at));
    pool.push_back(utf8 ? decode_utf8(s) : decode_utf16(s));
  }
  return pool;
}

class TreeBuilder {
 public:
  explicit TreeBuilder(const std::vector<std::string>* pool) : pool_(pool) {}

  const std::string& str(std::uint32_t index) const {
    if (index >= pool_->size()) {
      throw Error(Errc::BadStringIndex, "string index " + std::to_string(index) + " out of range");
    }
    return (*pool_)[index];
  }

  void start(Element element) {
    if (root_) {
      throw Error(Errc::UnbalancedElements, "more than one root element");
    }
    if (stack_.size() >= kMaxDepth) {
      throw Error(Errc::UnbalancedElements, "element nesting too deep");
    }
    stack_.push_back(std::move(element));
  }

  void end(const std::string& name) {
    if (stack_.empty()) {
      throw Error(Errc::UnbalancedElements, "end tag </" + name + "> without start");
    }
    if (stack_.back().name != name) {
      throw Error(Errc::UnbalancedElements, "</" + name + "> closes <" + stack_.back().name + ">");
    }
    Element done = std::move(stack_.back());
    stack_.pop_back();
    if (stack_.empty()) {
      root_ = std::move(done);
    } else {
      stack_.back().children.push_back(std::move(done));
    }
  }

  ManifestDocument finish() {
    if (!stack_.empty()) {
      throw Error(Errc::UnbalancedElements, "unclosed element <" + stack_.back().name + ">");
    }
    if (!root_) {
      throw Error(Errc::UnbalancedElements, "document has no root element");
    }
    return ManifestDocument{std::move(*root_)};
  }

 private:
  const std::vector<std::string>* pool_;
  std::vector<Element> stack_;
  std::optional<Element> root_;
};

std::string hex32(std::uint32_t v, const char* prefix) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%s%08x", prefix, v);
  return buf;
}

std::string typed_value(const TreeBuilder& tree, std::uint8_t type, std::uint32_t data) {
  switch (type) {
    case kTypeNull: return {};
    case kTypeReference: return hex32(data, "@0x");
    case kTypeString: return tree.str(data);
    case kTypeFloat: {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%g", static_cast<double>(std::bit_cast<float>(data)));
      return buf;
    }
    case kTypeIntDec: return std::to_string(static_cast<std::int32_t>(data));
    case kTypeBoolean: return data != 0 ? "true" : "false";
    case kTypeIntHex:
    default: return hex32(data, "0x");
  }
}

Element parse_start_element(std::span<const std::uint8_t> chunk, std::size_t header_size, const TreeBuilder& tree) {
  if (header_size < kNodeHeaderSize) {
    throw Error(Errc::TruncatedChunk, "element node header too small");
  }
  ByteReader r(chunk, Errc::TruncatedChunk);
  r.seek(header_size);
  const std::size_t ext = r.position();
  r.u32();  // element namespace
  const std::uint32_t name = r.u32();
  const std::uint16_t attr_start = r.u16();
  const std::uint16_t attr_size = r.u16();
  const std::uint16_t attr_count = r.u16();
  r.skip(6);  // id, class, style indices
  static_assert(kAttrExtSize == 20);

  Element element;
  element.name = tree.str(name);
  if (attr_count == 0) {
    return element;
  }
  if (attr_size < kAttributeSize) {
    throw Error(Errc::TruncatedChunk, "attribute record too small");
  }
  if (ext + attr_start + std::size_t{attr_count} * attr_size > chunk.size()) {
    throw Error(Errc::TruncatedChunk, "attributes exceed element chunk");
  }
  element.attributes.reserve(attr_count);
  for (std::uint16_t i = 0; i < attr_count; ++i) {
    r.seek(ext + attr_start + std::size_t{i} * attr_size);
    const std::uint32_t ns = r.u32();
    const std::uint32_t attr_name = r.u32();
    const std::uint32_t raw = r.u32();
    r.u16();  // Res_value size
    r.u8();   // res0
    const std::uint8_t type = r.u8();
    const std::uint32_t data = r.u32();

    Attribute attr;
    attr.ns = ns == kNoIndex ? std::string() : tree.str(ns);
    attr.name = tree.str(attr_name);
    attr.value = raw != kNoIndex ? tree.str(raw) : typed_value(tree, type, data);
    element.attributes.push_back(std::move(attr));
  }
  return element;
}

std::string parse_end_element(std::span<const std::uint8_t> chunk, std::size_t header_size, const TreeBuilder& tree) {
  if (header_size < kNodeHeaderSize) {
    throw Error(Errc::TruncatedChunk, "element node header too small");
  }
  ByteReader r(chunk, Errc::TruncatedChunk);
  r.seek(header_size);
  r.u32();  // namespace
  return tree.str(r.u32());
}

void check_namespace_node(std::span<const std::uint8_t> chunk, std::size_t header_size, const TreeBuilder& tree) {
  if (header_size < kNodeHeaderSize) {
    throw Error(Errc::TruncatedChunk, "namespace node header too small");
  }
  ByteReader r(chunk, Errc::TruncatedChunk);
  r.seek(header_size);
  const std::uint32_t prefix = r.u32();
  const std::uint32_t uri = r.u32();
  if (prefix != kNoIndex) tree.str(prefix);
  if (uri != kNoIndex) tree.str(uri);
}

}  // namespace

bool looks_like_axml(std::span<const std::uint8_t> bytes) {
  return bytes.size() >= 2 && load_le<std::uint16_t>(bytes, 0) == kXmlType;
}

ManifestDocument parse_axml(std::span<const std::uint8_t> bytes) {
  ByteReader file(bytes, Errc::TruncatedChunk);
  const std::uint16_t type = file.u16();
  const std::uint16_t header_size = file.u16();
  const std::uint32_t size = file.u32();
  if (type != kXmlType || header_size != 8) {
    throw Error(Errc::BadMagic, "not an Android binary XML document");
  }
  if (size < 8 || size > bytes.size()) {
    throw Error(Errc::TruncatedChunk, "document size exceeds input");
  }
  const auto doc = bytes.first(size);

  std::vector<std::string> pool;
  TreeBuilder tree(&pool);
  bool first = true;
  std::size_t pos = header_size;
  while (pos < doc.size()) {
    if (doc.size() - pos < 8) {
      throw Error(Errc::TruncatedChunk, "chunk header cut short");
    }
    const std::uint16_t chunk_type = load_le<std::uint16_t>(doc, pos);
    const std::uint16_t chunk_header = load_le<std::uint16_t>(doc, pos + 2);
    const std::uint32_t chunk_size = load_le<std::uint32_t>(doc, pos + 4);
    if (chunk_size < 8 || chunk_header < 8 || chunk_header > chunk_size) {
      throw Error(Errc::TruncatedChunk, "malformed chunk header");
    }
    if (chunk_size > doc.size() - pos) {
      throw Error(Errc::TruncatedChunk, "chunk size exceeds remaining bytes");
    }
    const auto chunk = doc.subspan(pos, chunk_size);
    if (first && chunk_type != kStringPoolType) {
      throw Error(Errc::BadMagic, "document does not start with a string pool");
    }
    first = false;

    switch (chunk_type) {
      case kStringPoolType:
        pool = parse_string_pool(chunk, chunk_header);
        break;
      case kStartNamespaceType:
      case kEndNamespaceType:
        check_namespace_node(chunk, chunk_header, tree);
        break;
      case kStartElementType:
        tree.start(parse_start_element(chunk, chunk_header, tree));
        break;
      case kEndElementType:
        tree.end(parse_end_element(chunk, chunk_header, tree));
        break;
      case kResourceMapType:
      default:
        // Resource map, CDATA and unknown chunks: skipped by declared size.
        break;
    }
    pos += chunk_size;
  }
  if (first) {
    throw Error(Errc::BadMagic, "document has no string pool");
  }
  return tree.finish();
}

}  // namespace permnet
