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

#include "axml_writer.hpp"

#include <map>
#include <string>

namespace permnet::testing {

namespace {

constexpr std::uint32_t kNone = 0xffffffff;

void put16(std::vector<std::uint8_t>& b, std::uint16_t v) {
  b.push_back(static_cast<std::uint8_t>(v));
  b.push_back(static_cast<std::uint8_t>(v >> 8));
}

void put32(std::vector<std::uint8_t>& b, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) b.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

void patch32(std::vector<std::uint8_t>& b, std::size_t at, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) b[at + i] = static_cast<std::uint8_t>(v >> (8 * i));
}

class Pool {
 public:
  std::uint32_t id(const std::string& s) {
    auto [it, inserted] = index_.try_emplace(s, static_cast<std::uint32_t>(strings_.size()));
    if (inserted) strings_.push_back(s);
    return it->second;
  }

  std::vector<std::uint8_t> encode(bool utf8) const {
    std::vector<std::uint8_t> data;
    std::vector<std::uint32_t> offsets;
    for (const auto& s : strings_) {
      offsets.push_back(static_cast<std::uint32_t>(data.size()));
      if (utf8) {
        put_len8(data, to_utf16(s).size());
        put_len8(data, s.size());
        data.insert(data.end(), s.begin(), s.end());
        data.push_back(0);
      } else {
        const auto units = to_utf16(s);
        if (units.size() > 0x7fff) {
          put16(data, static_cast<std::uint16_t>(0x8000 | (units.size() >> 16)));
          put16(data, static_cast<std::uint16_t>(units.size() & 0xffff));
        } else {
          put16(data, static_cast<std::uint16_t>(units.size()));
        }
        for (auto u : units) put16(data, u);
        put16(data, 0);
      }
    }
    while (data.size() % 4) data.push_back(0);

    std::vector<std::uint8_t> chunk;
    const std::uint32_t header = 28;
    const auto strings_start = static_cast<std::uint32_t>(header + 4 * strings_.size());
    put16(chunk, 0x0001);
    put16(chunk, header);
    put32(chunk, static_cast<std::uint32_t>(strings_start + data.size()));
    put32(chunk, static_cast<std::uint32_t>(strings_.size()));
    put32(chunk, 0);  // styles
    put32(chunk, utf8 ? 0x100 : 0);
    put32(chunk, strings_start);
    put32(chunk, 0);
    for (auto o : offsets) put32(chunk, o);
    chunk.insert(chunk.end(), data.begin(), data.end());
    return chunk;
  }

 private:
  static void put_len8(std::vector<std::uint8_t>& b, std::size_t n) {
    if (n > 0x7f) {
      b.push_back(static_cast<std::uint8_t>(0x80 | (n >> 8)));
      b.push_back(static_cast<std::uint8_t>(n & 0xff));
    } else {
      b.push_back(static_cast<std::uint8_t>(n));
    }
  }

  std::vector<std::string> strings_;
  std::map<std::string, std::uint32_t> index_;
};

bool canonical_int(const std::string& s, std::int32_t& out) {
  if (s.empty() || s.size() > 11) return false;
  try {
    std::size_t used = 0;
    const long long v = std::stoll(s, &used);
    if (used != s.size() || v < INT32_MIN || v > INT32_MAX) return false;
    if (std::to_string(v) != s) return false;
    out = static_cast<std::int32_t>(v);
    return true;
  } catch (...) {
    return false;
  }
}

class Writer {
 public:
  explicit Writer(const AxmlWriteOptions& o) : opts_(o) {}

  void collect(const Element& e) {
    pool_.id(e.name);
    for (const auto& a : e.attributes) {
      pool_.id(a.name);
      pool_.id(a.value);
      if (!a.ns.empty() && !prefixes_.count(a.ns)) {
        const std::string prefix = a.ns == kAndroidNamespace ? "android" : "ns" + std::to_string(prefixes_.size());
        prefixes_[a.ns] = prefix;
        pool_.id(prefix);
        pool_.id(a.ns);
      }
    }
    for (const auto& c : e.children) collect(c);
  }

  void element(std::vector<std::uint8_t>& out, const Element& e) {
    const std::size_t start = out.size();
    put16(out, 0x0102);
    put16(out, 16);
    put32(out, 0);  // size, patched
    put32(out, 1);  // line
    put32(out, kNone);
    put32(out, kNone);  // element namespace
    put32(out, pool_.id(e.name));
    put16(out, 20);
    put16(out, 20);
    put16(out, static_cast<std::uint16_t>(e.attributes.size()));
    put16(out, 0);
    put16(out, 0);
    put16(out, 0);
    for (const auto& a : e.attributes) {
      put32(out, a.ns.empty() ? kNone : pool_.id(a.ns));
      put32(out, pool_.id(a.name));
      std::int32_t iv = 0;
      if (opts_.typed_values && canonical_int(a.value, iv)) {
        put32(out, kNone);
        put16(out, 8);
        out.push_back(0);
        out.push_back(0x10);
        put32(out, static_cast<std::uint32_t>(iv));
      } else if (opts_.typed_values && (a.value == "true" || a.value == "false")) {
        put32(out, kNone);
        put16(out, 8);
        out.push_back(0);
        out.push_back(0x12);
        put32(out, a.value == "true" ? 0xffffffffu : 0u);
      } else {
        const std::uint32_t v = pool_.id(a.value);
        put32(out, v);
        put16(out, 8);
        out.push_back(0);
        out.push_back(0x03);
        put32(out, v);
      }
    }
    patch32(out, start + 4, static_cast<std::uint32_t>(out.size() - start));
    for (const auto& c : e.children) element(out, c);
    put16(out, 0x0103);
    put16(out, 16);
    put32(out, 24);
    put32(out, 1);
    put32(out, kNone);
    put32(out, kNone);
    put32(out, pool_.id(e.name));
  }

  void ns_node(std::vector<std::uint8_t>& out, std::uint16_t type, const std::string& prefix, const std::string& uri) {
    put16(out, type);
    put16(out, 16);
    put32(out, 24);
    put32(out, 1);
    put32(out, kNone);
    put32(out, pool_.id(prefix));
    put32(out, pool_.id(uri));
  }

  std::vector<std::uint8_t> write(const Element& root) {
    collect(root);
    std::vector<std::uint8_t> body;
    if (opts_.resource_map) {
      put16(body, 0x0180);
      put16(body, 8);
      put32(body, 16);
      put32(body, 0x01010003);
      put32(body, 0x0101021b);
    }
    for (const auto& [uri, prefix] : prefixes_) ns_node(body, 0x0100, prefix, uri);
    element(body, root);
    for (auto it = prefixes_.rbegin(); it != prefixes_.rend(); ++it) ns_node(body, 0x0101, it->second, it->first);

    const auto pool = pool_.encode(opts_.utf8);
    std::vector<std::uint8_t> out;
    put16(out, 0x0003);
    put16(out, 8);
    put32(out, static_cast<std::uint32_t>(8 + pool.size() + body.size()));
    out.insert(out.end(), pool.begin(), pool.end());
    out.insert(out.end(), body.begin(), body.end());
    return out;
  }

 private:
  AxmlWriteOptions opts_;
  Pool pool_;
  std::map<std::string, std::string> prefixes_;
};

}  // namespace

std::vector<std::uint16_t> to_utf16(const std::string& s) {
  std::vector<std::uint16_t> out;
  for (std::size_t i = 0; i < s.size();) {
    const auto c = static_cast<unsigned char>(s[i]);
    std::uint32_t cp;
    std::size_t len;
    if (c < 0x80) {
      cp = c;
      len = 1;
    } else if ((c >> 5) == 0x6) {
      cp = c & 0x1f;
      len = 2;
    } else if ((c >> 4) == 0xe) {
      cp = c & 0x0f;
      len = 3;
    } else {
      cp = c & 0x07;
      len = 4;
    }
    for (std::size_t k = 1; k < len; ++k) cp = (cp << 6) | (static_cast<unsigned char>(s[i + k]) & 0x3f);
    i += len;
    if (cp >= 0x10000) {
      cp -= 0x10000;
      out.push_back(static_cast<std::uint16_t>(0xd800 + (cp >> 10)));
      out.push_back(static_cast<std::uint16_t>(0xdc00 + (cp & 0x3ff)));
    } else {
      out.push_back(static_cast<std::uint16_t>(cp));
    }
  }
  return out;
}

std::vector<std::uint8_t> write_axml(const Element& root, const AxmlWriteOptions& options) {
  return Writer(options).write(root);
}

}  // namespace permnet::testing
