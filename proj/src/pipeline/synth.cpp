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

#include "permnet/pipeline/synth.hpp"

#include <array>
#include <cmath>
#include <cstdio>
#include <random>

#include "json.hpp"
#include "permnet/error.hpp"

namespace permnet::pipeline {

namespace {

constexpr std::array<std::string_view, 48> kAndroidPermissions = {
    "android.permission.INTERNET",
    "android.permission.ACCESS_NETWORK_STATE",
    "android.permission.READ_PHONE_STATE",
    "android.permission.WRITE_EXTERNAL_STORAGE",
    "android.permission.ACCESS_WIFI_STATE",
    "android.permission.RECEIVE_BOOT_COMPLETED",
    "android.permission.SEND_SMS",
    "android.permission.RECEIVE_SMS",
    "android.permission.READ_SMS",
    "android.permission.WRITE_SMS",
    "android.permission.READ_CONTACTS",
    "android.permission.CALL_PHONE",
    "android.permission.WAKE_LOCK",
    "android.permission.ACCESS_FINE_LOCATION",
    "android.permission.ACCESS_COARSE_LOCATION",
    "android.permission.VIBRATE",
    "android.permission.CAMERA",
    "android.permission.RECORD_AUDIO",
    "android.permission.GET_ACCOUNTS",
    "android.permission.READ_EXTERNAL_STORAGE",
    "android.permission.CHANGE_WIFI_STATE",
    "android.permission.PROCESS_OUTGOING_CALLS",
    "android.permission.READ_CALL_LOG",
    "android.permission.WRITE_CALL_LOG",
    "android.permission.WRITE_CONTACTS",
    "android.permission.INSTALL_PACKAGES",
    "android.permission.DELETE_PACKAGES",
    "android.permission.RESTART_PACKAGES",
    "android.permission.KILL_BACKGROUND_PROCESSES",
    "android.permission.SYSTEM_ALERT_WINDOW",
    "android.permission.GET_TASKS",
    "android.permission.MOUNT_UNMOUNT_FILESYSTEMS",
    "android.permission.CHANGE_NETWORK_STATE",
    "android.permission.WRITE_SETTINGS",
    "android.permission.DISABLE_KEYGUARD",
    "android.permission.BLUETOOTH",
    "android.permission.BLUETOOTH_ADMIN",
    "android.permission.NFC",
    "android.permission.USE_CREDENTIALS",
    "android.permission.MANAGE_ACCOUNTS",
    "android.permission.AUTHENTICATE_ACCOUNTS",
    "android.permission.READ_SYNC_SETTINGS",
    "android.permission.WRITE_SYNC_SETTINGS",
    "android.permission.SET_WALLPAPER",
    "android.permission.EXPAND_STATUS_BAR",
    "android.permission.MODIFY_AUDIO_SETTINGS",
    "android.permission.BROADCAST_STICKY",
    "android.permission.CHANGE_CONFIGURATION",
};

// Uniform double in [0, 1) from the top 53 bits; independent of the
// standard library's distribution implementations.
double unit(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

bool valid_rate(double p) { return std::isfinite(p) && p >= 0.0 && p <= 1.0; }

}  // namespace

void SynthSpec::validate() const {
  if (botnet_count == 0 || benign_count == 0) throw Error(Errc::InvalidSpec, "both classes need at least one sample");
  if (botnet_signature + benign_signature > pool_size) {
    throw Error(Errc::InvalidSpec, "pool_size is smaller than the two signatures combined");
  }
  if (!valid_rate(signature_rate) || !valid_rate(noise_rate)) {
    throw Error(Errc::InvalidSpec, "signature_rate and noise_rate must lie in [0, 1]");
  }
}

double SynthSpec::inclusion_probability(ClassLabel label, std::size_t index) const {
  const bool botnet_sig = index < botnet_signature;
  const bool benign_sig = index >= botnet_signature && index < botnet_signature + benign_signature;
  const bool own = label == ClassLabel::Botnet ? botnet_sig : benign_sig;
  return own ? signature_rate : noise_rate;
}

SynthSpec parse_synth_spec(std::string_view json_text, SynthSpec base) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::InvalidSpec, std::string("synth spec: ") + e.what());
  }
  if (!doc.is_object()) throw Error(Errc::InvalidSpec, "synth spec must be a JSON object");
  try {
    for (const auto& [key, value] : doc.items()) {
      if (key == "botnet_count") base.botnet_count = value.get<std::size_t>();
      else if (key == "benign_count") base.benign_count = value.get<std::size_t>();
      else if (key == "pool_size") base.pool_size = value.get<std::size_t>();
      else if (key == "botnet_signature") base.botnet_signature = value.get<std::size_t>();
      else if (key == "benign_signature") base.benign_signature = value.get<std::size_t>();
      else if (key == "signature_rate") base.signature_rate = value.get<double>();
      else if (key == "noise_rate") base.noise_rate = value.get<double>();
      else if (key == "seed") base.seed = value.get<std::uint64_t>();
      else throw Error(Errc::InvalidSpec, "unknown synth spec key: " + key);
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::InvalidSpec, std::string("synth spec: ") + e.what());
  }
  base.validate();
  return base;
}

std::vector<std::string> synthetic_permission_pool(std::size_t size) {
  std::vector<std::string> pool;
  pool.reserve(size);
  for (std::size_t i = 0; i < size; ++i) {
    if (i < kAndroidPermissions.size()) {
      pool.emplace_back(kAndroidPermissions[i]);
    } else {
      char buf[64];
      std::snprintf(buf, sizeof buf, "com.example.permission.SYNTH_%03zu", i - kAndroidPermissions.size());
      pool.emplace_back(buf);
    }
  }
  return pool;
}

SyntheticCorpus generate_synthetic_corpus(const SynthSpec& spec) {
  spec.validate();
  const auto pool = synthetic_permission_pool(spec.pool_size);
  std::mt19937_64 rng(spec.seed);
  SyntheticCorpus out;
  auto emit = [&](ClassLabel label, std::size_t count) {
    for (std::size_t s = 0; s < count; ++s) {
      char name[64];
      std::snprintf(name, sizeof name, "%s_%04zu", to_string(label), s);
      PermissionSet set;
      set.app_id = name;
      for (std::size_t i = 0; i < pool.size(); ++i) {
        if (unit(rng) < spec.inclusion_probability(label, i)) set.permissions.insert(pool[i]);
      }
      out.manifest.records.push_back({std::string(name) + ".txt", label, SourceKind::PermissionList});
      out.sets.push_back(std::move(set));
      out.labels.push_back(label);
    }
  };
  emit(ClassLabel::Botnet, spec.botnet_count);
  emit(ClassLabel::Benign, spec.benign_count);
  return out;
}

DatasetManifest write_synthetic_corpus(const SynthSpec& spec, const std::filesystem::path& dir) {
  const SyntheticCorpus corpus = generate_synthetic_corpus(spec);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(Errc::Io, "cannot create " + dir.string() + ": " + ec.message());
  for (std::size_t i = 0; i < corpus.sets.size(); ++i) {
    write_file_text(dir / corpus.manifest.records[i].path, format_permission_list(corpus.sets[i]));
  }
  const auto csv_path = dir / kSyntheticManifestName;
  write_file_text(csv_path, format_dataset_csv(corpus.manifest));
  return load_dataset_manifest(csv_path);
}

}  // namespace permnet::pipeline
