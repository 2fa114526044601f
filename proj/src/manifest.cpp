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

#include "permnet/manifest.hpp"

#include <expat.h>

#include <fstream>
#include <iterator>
#include <memory>
#include <optional>

#include "permnet/error.hpp"
#include "permnet/zip_archive.hpp"

namespace permnet {

namespace {

constexpr char kNsSeparator = '\x1f';

std::string_view trim(std::string_view s) {
  constexpr std::string_view ws = " \t\r\n\f\v";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

// Expat reports qualified names as "uri<sep>local" when the name has a namespace.
void split_qualified(const XML_Char* qname, std::string& ns, std::string& local) {
  std::string_view q(qname);
  const auto sep = q.find(kNsSeparator);
  if (sep == std::string_view::npos) {
    ns.clear();
    local.assign(q);
  } else {
    ns.assign(q.substr(0, sep));
    local.assign(q.substr(sep + 1));
  }
}

struct PlainParseState {
  std::vector<Element> stack;
  std::optional<Element> root;
  bool extra_root = false;
};

void XMLCALL on_start(void* user, const XML_Char* name, const XML_Char** attrs) {
  auto* st = static_cast<PlainParseState*>(user);
  Element element;
  std::string ignored_ns;
  split_qualified(name, ignored_ns, element.name);
  for (const XML_Char** a = attrs; *a != nullptr; a += 2) {
    Attribute attr;
    split_qualified(a[0], attr.ns, attr.name);
    attr.value = a[1];
    element.attributes.push_back(std::move(attr));
  }
  st->stack.push_back(std::move(element));
}

void XMLCALL on_end(void* user, const XML_Char*) {
  auto* st = static_cast<PlainParseState*>(user);
  Element done = std::move(st->stack.back());
  st->stack.pop_back();
  if (st->stack.empty()) {
    st->root = std::move(done);
  } else {
    st->stack.back().children.push_back(std::move(done));
  }
}

struct ParserDeleter {
  void operator()(XML_Parser p) const { XML_ParserFree(p); }
};

}  // namespace

const Attribute* Element::find_attribute(std::string_view ns, std::string_view attr_name) const {
  for (const auto& a : attributes) {
    if (a.ns == ns && a.name == attr_name) return &a;
  }
  return nullptr;
}

ManifestDocument parse_plain_manifest(std::string_view text) {
  std::unique_ptr<XML_ParserStruct, ParserDeleter> parser(XML_ParserCreateNS("UTF-8", kNsSeparator));
  if (!parser) {
    throw Error(Errc::MalformedXml, "cannot create XML parser");
  }
  PlainParseState state;
  XML_SetUserData(parser.get(), &state);
  XML_SetElementHandler(parser.get(), on_start, on_end);
  if (XML_Parse(parser.get(), text.data(), static_cast<int>(text.size()), XML_TRUE) == XML_STATUS_ERROR) {
    const auto line = XML_GetCurrentLineNumber(parser.get());
    throw Error(Errc::MalformedXml, std::string(XML_ErrorString(XML_GetErrorCode(parser.get()))) +
                                        " at line " + std::to_string(line));
  }
  if (!state.root) {
    throw Error(Errc::MalformedXml, "document has no root element");
  }
  return ManifestDocument{std::move(*state.root)};
}

ManifestDocument parse_manifest(std::span<const std::uint8_t> bytes) {
  if (looks_like_axml(bytes)) {
    return parse_axml(bytes);
  }
  return parse_plain_manifest(std::string_view(reinterpret_cast<const char*>(bytes.data()), bytes.size()));
}

PermissionSet extract_permissions(const ManifestDocument& doc, std::string app_id,
                                  ExtractDiagnostics* diagnostics) {
  PermissionSet out;
  out.app_id = std::move(app_id);
  ExtractDiagnostics local;
  std::vector<const Element*> pending{&doc.root};
  while (!pending.empty()) {
    const Element* e = pending.back();
    pending.pop_back();
    if (e->name == "uses-permission" || e->name == "uses-permission-sdk-23") {
      ++local.requests_seen;
      const Attribute* name = e->find_attribute(kAndroidNamespace, "name");
      const std::string_view value = name ? trim(name->value) : std::string_view{};
      if (value.empty()) {
        ++local.blank_names_skipped;
      } else {
        out.permissions.emplace(value);
      }
    }
    for (const auto& child : e->children) pending.push_back(&child);
  }
  if (diagnostics) *diagnostics = local;
  return out;
}

PermissionSet parse_permission_list(std::string_view text, std::string app_id) {
  PermissionSet out;
  out.app_id = std::move(app_id);
  while (!text.empty()) {
    const auto nl = text.find('\n');
    const std::string_view line = trim(text.substr(0, nl));
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    if (line.empty() || line.front() == '#') continue;
    out.permissions.emplace(line);
  }
  return out;
}

std::string format_permission_list(const PermissionSet& perms) {
  std::string out;
  for (const auto& p : perms.permissions) {
    out += p;
    out += '\n';
  }
  return out;
}

const char* to_string(SourceKind kind) {
  switch (kind) {
    case SourceKind::Apk: return "apk";
    case SourceKind::Manifest: return "manifest";
    case SourceKind::PermissionList: return "permlist";
  }
  return "?";
}

SourceKind parse_source_kind(std::string_view text) {
  if (text == "apk") return SourceKind::Apk;
  if (text == "manifest") return SourceKind::Manifest;
  if (text == "permlist") return SourceKind::PermissionList;
  throw Error(Errc::InvalidArgument, "unknown source kind '" + std::string(text) + "'");
}

SourceKind guess_source_kind(const std::filesystem::path& path) {
  const auto ext = path.extension().string();
  if (ext == ".apk") return SourceKind::Apk;
  if (ext == ".txt") return SourceKind::PermissionList;
  return SourceKind::Manifest;
}

PermissionSet load_permission_set(const std::filesystem::path& path, SourceKind kind,
                                  ExtractDiagnostics* diagnostics) {
  switch (kind) {
    case SourceKind::Apk: {
      const auto archive = ApkArchive::open(path);
      const auto manifest = archive.read_manifest();
      return extract_permissions(parse_manifest(manifest), path.string(), diagnostics);
    }
    case SourceKind::Manifest: {
      const auto bytes = read_file_bytes(path);
      return extract_permissions(parse_manifest(bytes), path.string(), diagnostics);
    }
    case SourceKind::PermissionList:
      return parse_permission_list(read_file_text(path), path.string());
  }
  throw Error(Errc::InvalidArgument, "bad source kind");
}

std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(Errc::Io, "cannot open " + path.string());
  }
  return std::vector<std::uint8_t>((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

std::string read_file_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(Errc::Io, "cannot open " + path.string());
  }
  return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

void write_file_text(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw Error(Errc::Io, "cannot write " + path.string());
  }
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) {
    throw Error(Errc::Io, "write failed for " + path.string());
  }
}

}  // namespace permnet
