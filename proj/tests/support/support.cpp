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

#include "support.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace permnet::testing {

namespace fs = std::filesystem;

TempDir::TempDir(const std::string& tag) {
  static std::uint64_t counter = 0;
  std::random_device rd;
  for (int attempt = 0; attempt < 100; ++attempt) {
    const auto candidate = fs::temp_directory_path() /
                           ("permnet_" + tag + "_" + std::to_string(rd()) + "_" + std::to_string(counter++));
    if (fs::create_directories(candidate)) {
      path_ = candidate;
      return;
    }
  }
  throw std::runtime_error("cannot create temp dir");
}

TempDir::~TempDir() {
  std::error_code ec;
  fs::remove_all(path_, ec);
}

void write_bytes(const fs::path& path, const std::vector<std::uint8_t>& bytes) {
  std::ofstream out(path, std::ios::binary);
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

namespace {

void append_cp(std::string& out, std::uint32_t cp) {
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

std::string random_name(std::mt19937_64& rng) {
  static const char* kLetters = "abcdefghijklmnopqrstuvwxyz";
  std::string s;
  const std::size_t len = 1 + rng() % 10;
  for (std::size_t i = 0; i < len; ++i) s += kLetters[rng() % 26];
  return s;
}

std::string random_permission(std::mt19937_64& rng) {
  static const char* kNames[] = {"INTERNET",      "SEND_SMS",    "READ_SMS",     "CAMERA",
                                 "READ_CONTACTS", "WAKE_LOCK",   "CALL_PHONE",   "VIBRATE",
                                 "RECORD_AUDIO",  "GET_TASKS",   "READ_CALL_LOG", "BLUETOOTH"};
  switch (rng() % 3) {
    case 0: return std::string("android.permission.") + kNames[rng() % 12];
    case 1: return "com." + random_name(rng) + ".permission." + random_name(rng);
    default: return std::string("android.permission.") + kNames[rng() % 12] + "_" + std::to_string(rng() % 50);
  }
}

void add_unique(Element& e, Attribute a) {
  for (const auto& existing : e.attributes) {
    if (existing.ns == a.ns && existing.name == a.name) return;
  }
  e.attributes.push_back(std::move(a));
}

Element random_subtree(std::mt19937_64& rng, bool unicode, int depth) {
  Element e;
  e.name = random_name(rng);
  const std::size_t attrs = rng() % 4;
  for (std::size_t i = 0; i < attrs; ++i) {
    Attribute a;
    a.ns = rng() % 2 ? std::string(kAndroidNamespace) : std::string();
    a.name = random_name(rng);
    switch (rng() % 4) {
      case 0: a.value = std::to_string(static_cast<std::int32_t>(rng())); break;
      case 1: a.value = rng() % 2 ? "true" : "false"; break;
      default: a.value = random_text(rng, 24, unicode);
    }
    add_unique(e, std::move(a));
  }
  if (depth < 4) {
    const std::size_t kids = rng() % 3;
    for (std::size_t i = 0; i < kids; ++i) e.children.push_back(random_subtree(rng, unicode, depth + 1));
  }
  return e;
}

void escape_into(std::string& out, const std::string& s) {
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\t': out += "&#9;"; break;
      case '\n': out += "&#10;"; break;
      case '\r': out += "&#13;"; break;
      default: out += c;
    }
  }
}

void render(std::string& out, const Element& e, bool root) {
  out += "<" + e.name;
  if (root) out += " xmlns:android=\"" + std::string(kAndroidNamespace) + "\"";
  for (const auto& a : e.attributes) {
    out += " ";
    if (!a.ns.empty()) out += "android:";
    out += a.name + "=\"";
    escape_into(out, a.value);
    out += "\"";
  }
  if (e.children.empty()) {
    out += "/>\n";
    return;
  }
  out += ">\n";
  for (const auto& c : e.children) render(out, c, false);
  out += "</" + e.name + ">\n";
}

}  // namespace

std::string random_text(std::mt19937_64& rng, std::size_t max_len, bool allow_unicode) {
  std::string s;
  const std::size_t len = rng() % (max_len + 1);
  for (std::size_t i = 0; i < len; ++i) {
    const auto pick = allow_unicode ? rng() % 8 : 0;
    std::uint32_t cp;
    if (pick < 5) {
      cp = 0x20 + static_cast<std::uint32_t>(rng() % 95);
    } else if (pick == 5) {
      cp = 0xa0 + static_cast<std::uint32_t>(rng() % 0x260);
    } else if (pick == 6) {
      cp = 0x4e00 + static_cast<std::uint32_t>(rng() % 0x1000);
    } else {
      cp = 0x1f600 + static_cast<std::uint32_t>(rng() % 0x50);
    }
    append_cp(s, cp);
  }
  return s;
}

Element random_manifest(std::mt19937_64& rng, bool allow_unicode, std::vector<std::string>* expected) {
  Element root;
  root.name = "manifest";
  root.attributes.push_back({"", "package", "com." + random_name(rng) + "." + random_name(rng)});
  root.attributes.push_back({std::string(kAndroidNamespace), "versionCode", std::to_string(rng() % 1000)});
  const std::size_t n = rng() % 30;
  for (std::size_t i = 0; i < n; ++i) {
    const auto kind = rng() % 10;
    if (kind < 6) {
      Element p;
      p.name = rng() % 5 == 0 ? "uses-permission-sdk-23" : "uses-permission";
      const auto blank = rng() % 12;
      std::string name = blank == 0 ? "" : blank == 1 ? "   " : random_permission(rng);
      if (expected && !name.empty() && name.find_first_not_of(' ') != std::string::npos) expected->push_back(name);
      if (rng() % 8 == 0 && !name.empty() && name != "   ") name = " " + name + "\t";
      p.attributes.push_back({std::string(kAndroidNamespace), "name", name});
      if (rng() % 4 == 0) p.attributes.push_back({std::string(kAndroidNamespace), "maxSdkVersion", "22"});
      root.children.push_back(std::move(p));
    } else if (kind < 7) {
      // Declared, not requested: must not be extracted.
      Element p;
      p.name = "permission";
      p.attributes.push_back({std::string(kAndroidNamespace), "name", random_permission(rng)});
      root.children.push_back(std::move(p));
    } else {
      root.children.push_back(random_subtree(rng, allow_unicode, 1));
    }
  }
  if (expected) {
    std::sort(expected->begin(), expected->end());
    expected->erase(std::unique(expected->begin(), expected->end()), expected->end());
  }
  return root;
}

std::string to_plain_xml(const Element& root) {
  std::string out = "<?xml version=\"1.0\" encoding=\"utf-8\"?>\n";
  render(out, root, true);
  return out;
}

PgmImage read_pgm(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::string magic;
  int maxval = 0;
  PgmImage img;
  in >> magic >> img.width >> img.height >> maxval;
  if (magic != "P5" || maxval != 255) throw std::runtime_error("not an 8-bit P5 image");
  in.get();  // single whitespace after maxval
  img.pixels.resize(img.width * img.height);
  in.read(reinterpret_cast<char*>(img.pixels.data()), static_cast<std::streamsize>(img.pixels.size()));
  if (!in) throw std::runtime_error("truncated PGM");
  return img;
}

}  // namespace permnet::testing
