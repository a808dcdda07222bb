// Copyright 2026 The socint Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SOCINT_DATASET_IO_H_
#define SOCINT_DATASET_IO_H_

// JSON Lines dataset files.
//
//   {"meta": {"n_actions": N, "horizon": T, "n_types": |Theta|,
//             "master_seed": s, "population": "<name>", "k": K}}
//   {"theta1": 0, "theta2": 1, "actions": [[0,1],[0,0],...]}
//   ...
//
// The header is one line; then exactly K episode lines.  Output is written
// by hand so the bytes depend only on the dataset contents.

#include <cstdint>
#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "json.hpp"
#include "socint/errors.h"
#include "socint/game.h"
#include "socint/imitation.h"

namespace socint {

// 64-bit FNV-1a, used for file checksums and config hashes.
inline std::uint64_t Fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline std::string HexDigest(std::uint64_t h) {
  std::ostringstream out;
  out << std::hex << std::setw(16) << std::setfill('0') << h;
  return out.str();
}

inline void WriteDataset(const Dataset& d, std::ostream& out) {
  out << "{\"meta\": {\"n_actions\": " << d.meta.n_actions
      << ", \"horizon\": " << d.meta.horizon
      << ", \"n_types\": " << d.meta.n_types
      << ", \"master_seed\": " << d.meta.master_seed
      << ", \"population\": " << nlohmann::json(d.meta.population).dump()
      << ", \"k\": " << d.meta.k << "}}\n";
  for (const EpisodeRecord& ep : d.episodes) {
    out << "{\"theta1\": " << ep.joint_type.theta1
        << ", \"theta2\": " << ep.joint_type.theta2 << ", \"actions\": [";
    for (size_t t = 0; t < ep.history.size(); ++t) {
      if (t) out << ',';
      out << '[' << ep.history[t].first << ',' << ep.history[t].second << ']';
    }
    out << "]}\n";
  }
}

inline std::string SerializeDataset(const Dataset& d) {
  std::ostringstream out;
  WriteDataset(d, out);
  return out.str();
}

namespace internal {

template <typename T>
T RequireField(const nlohmann::json& obj, const char* field, int line) {
  if (!obj.is_object() || !obj.contains(field)) {
    throw ConfigError("dataset line " + std::to_string(line) +
                      ": missing field '" + field + "'");
  }
  try {
    return obj.at(field).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ConfigError("dataset line " + std::to_string(line) + ": field '" +
                      field + "' has the wrong type");
  }
}

}  // namespace internal

// Parses and validates a dataset; every problem is reported as ConfigError
// with the offending line number.  Episode seeds are not stored on disk and
// read back as 0.
inline Dataset ReadDataset(std::istream& in) {
  Dataset d;
  std::string line;
  int line_no = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    nlohmann::json obj;
    try {
      obj = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw ConfigError("dataset line " + std::to_string(line_no) +
                        ": invalid JSON: " + e.what());
    }
    if (!have_header) {
      if (!obj.is_object() || !obj.contains("meta")) {
        throw ConfigError("dataset line 1: expected the meta header");
      }
      const nlohmann::json& meta = obj["meta"];
      d.meta.n_actions = internal::RequireField<int>(meta, "n_actions", line_no);
      d.meta.horizon = internal::RequireField<int>(meta, "horizon", line_no);
      d.meta.n_types = internal::RequireField<int>(meta, "n_types", line_no);
      d.meta.master_seed =
          internal::RequireField<std::uint64_t>(meta, "master_seed", line_no);
      d.meta.population =
          internal::RequireField<std::string>(meta, "population", line_no);
      d.meta.k = internal::RequireField<int>(meta, "k", line_no);
      if (d.meta.n_actions < 1 || d.meta.horizon < 1 || d.meta.n_types < 1 ||
          d.meta.k < 0) {
        throw ConfigError("dataset header has out-of-range values");
      }
      have_header = true;
      continue;
    }
    EpisodeRecord ep;
    ep.joint_type.theta1 = internal::RequireField<int>(obj, "theta1", line_no);
    ep.joint_type.theta2 = internal::RequireField<int>(obj, "theta2", line_no);
    const auto actions =
        internal::RequireField<std::vector<std::vector<int>>>(obj, "actions",
                                                              line_no);
    for (int theta : {ep.joint_type.theta1, ep.joint_type.theta2}) {
      if (theta < 0 || theta >= d.meta.n_types) {
        throw ConfigError("dataset line " + std::to_string(line_no) +
                          ": type out of range");
      }
    }
    if (static_cast<int>(actions.size()) != d.meta.horizon) {
      throw ConfigError("dataset line " + std::to_string(line_no) +
                        ": history length differs from the horizon");
    }
    for (const auto& pair : actions) {
      if (pair.size() != 2 || pair[0] < 0 || pair[0] >= d.meta.n_actions ||
          pair[1] < 0 || pair[1] >= d.meta.n_actions) {
        throw ConfigError("dataset line " + std::to_string(line_no) +
                          ": malformed joint action");
      }
      ep.history.push_back({pair[0], pair[1]});
    }
    d.episodes.push_back(std::move(ep));
  }
  if (!have_header) throw ConfigError("dataset is empty (no header line)");
  if (static_cast<int>(d.episodes.size()) != d.meta.k) {
    throw ConfigError("dataset header says k = " + std::to_string(d.meta.k) +
                      " but holds " + std::to_string(d.episodes.size()) +
                      " episodes");
  }
  return d;
}

inline Dataset ReadDatasetFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open dataset file '" + path + "'");
  return ReadDataset(in);
}

// Header consistency with the game an experiment is about to use.
inline void CheckDatasetMatchesGame(const DatasetMeta& meta,
                                    const GameClass& game) {
  if (meta.n_actions != game.n_actions() || meta.horizon != game.horizon() ||
      meta.n_types != game.n_types()) {
    throw ConfigError(
        "dataset header (N=" + std::to_string(meta.n_actions) +
        ", T=" + std::to_string(meta.horizon) +
        ", |Theta|=" + std::to_string(meta.n_types) +
        ") does not match the configured game (N=" +
        std::to_string(game.n_actions()) + ", T=" +
        std::to_string(game.horizon()) + ", |Theta|=" +
        std::to_string(game.n_types()) + ")");
  }
}

}  // namespace socint

#endif  // SOCINT_DATASET_IO_H_
