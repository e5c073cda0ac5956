// Copyright 2026 The qgd Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

/**
 * @file io.hpp
 * @brief Result files, write-ahead task journal and run manifest.
 *
 * Result and journal files are JSON lines. Objects serialize with sorted keys,
 * so two runs that produce the same results produce byte-identical files.
 */
#pragma once

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <mutex>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>
#include <openssl/evp.h>

#include "qgd/search.hpp"

namespace qgd {

/// Malformed input file; what() carries "path:line: message".
struct file_format_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Hashing

/// Git blob id of `content`: SHA-1 over "blob <size>\0" followed by the bytes.
inline std::string git_blob_sha1(const std::string& content) {
  const std::string header = "blob " + std::to_string(content.size()) + '\0';
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  if (!ctx) throw std::runtime_error("sha1: cannot allocate digest context");
  const bool ok = EVP_DigestInit_ex(ctx, EVP_sha1(), nullptr) == 1 &&
                  EVP_DigestUpdate(ctx, header.data(), header.size()) == 1 &&
                  EVP_DigestUpdate(ctx, content.data(), content.size()) == 1 &&
                  EVP_DigestFinal_ex(ctx, md, &len) == 1;
  EVP_MD_CTX_free(ctx);
  if (!ok) throw std::runtime_error("sha1: digest failed");
  std::ostringstream os;
  for (unsigned int i = 0; i < len; ++i) os << std::hex << std::setw(2) << std::setfill('0') << int{md[i]};
  return os.str();
}

// ---------------------------------------------------------------------------
// Job description

/// Everything that determines a job's results; worker count is excluded.
inline nlohmann::json job_to_json(const SearchJob& job) {
  nlohmann::json j;
  j["target"] = {{"label", job.target_label},
                 {"n_qubits", job.spec.n_qubits()},
                 {"ancillas", job.spec.ancillas()},
                 {"matrix", job.spec.target()}};
  j["connectivity"] = {{"label", job.connectivity_label}, {"graph", job.graph}};
  j["budget"] = {{"mode", std::string(to_string(job.budget.mode))}, {"value", job.budget.value}};
  j["restarts_per_structure"] = job.restarts_per_structure;
  j["template"] = {{"style", std::string(to_string(job.templ.style))}, {"full_start", job.templ.full_start}};
  const auto& o = job.optimizer;
  j["optimizer"] = {{"max_sweeps", o.max_sweeps},
                    {"convergence_eps", o.convergence_eps},
                    {"stall_eps", o.stall_eps},
                    {"stall_sweeps", o.stall_sweeps},
                    {"plateau_window", o.plateau_window},
                    {"plateau_ratio", o.plateau_ratio},
                    {"order", o.order == SweepOrder::Zigzag ? "zigzag" : "shuffled"},
                    {"rebuild_interval", o.rebuild_interval},
                    {"polish_sweeps", o.polish_sweeps},
                    {"polish_factor", o.polish_factor}};
  j["base_seed"] = job.base_seed;
  j["stop_at_first_solution"] = job.stop_at_first_solution;
  j["first_hit_per_structure"] = job.first_hit_per_structure;
  j["dedup"] = job.dedup;
  j["fixed_structure"] = job.fixed_structure ? nlohmann::json(*job.fixed_structure) : nlohmann::json();
  j["max_structures"] = job.max_structures ? nlohmann::json(*job.max_structures) : nlohmann::json();
  j["batch_structures"] = job.batch_structures;
  return j;
}

inline std::string config_hash(const SearchJob& job) { return git_blob_sha1(job_to_json(job).dump()); }

// ---------------------------------------------------------------------------
// Results

inline nlohmann::json result_to_json(const DecompositionResult& r) {
  return {{"target", r.target_label},
          {"connectivity", r.connectivity_label},
          {"structure_index", r.structure_index},
          {"restart", r.restart},
          {"seed", r.seed},
          {"structure", r.structure},
          {"circuit", circuit_to_json(r.circuit)},
          {"angles", canonical_angles(r.angles)},
          {"fidelity", r.fidelity},
          {"infidelity", r.infidelity},
          {"cz_count", r.cz_count},
          {"cz_depth", r.cz_depth},
          {"sweeps", r.sweeps}};
}

/// Parse a result; CZ tallies are recomputed from the circuit, never read.
inline DecompositionResult result_from_json(const nlohmann::json& j) {
  DecompositionResult r;
  r.target_label = j.at("target").get<std::string>();
  r.connectivity_label = j.at("connectivity").get<std::string>();
  r.structure_index = j.at("structure_index").get<std::uint64_t>();
  r.restart = j.at("restart").get<int>();
  r.seed = j.at("seed").get<std::uint64_t>();
  r.structure = j.at("structure").get<CircuitStructure>();
  r.circuit = circuit_from_json(j.at("circuit")).circuit;
  r.angles = j.at("angles").get<AngleVector>();
  check_angles(r.circuit, r.angles);
  r.fidelity = j.at("fidelity").get<double>();
  r.infidelity = j.at("infidelity").get<double>();
  r.cz_count = r.circuit.cz_count();
  r.cz_depth = r.circuit.cz_depth();
  r.sweeps = j.value("sweeps", 0);
  return r;
}

/// Results sorted by (structure index, restart).
inline std::string results_jsonl(std::vector<DecompositionResult> results) {
  std::sort(results.begin(), results.end(), [](const auto& a, const auto& b) {
    return std::pair(a.structure_index, a.restart) < std::pair(b.structure_index, b.restart);
  });
  std::string out;
  for (const auto& r : results) out += result_to_json(r).dump() + '\n';
  return out;
}

/// Parse JSON lines, calling fn(json, line_number) per nonblank line.
template <class Fn>
void for_each_jsonl(std::istream& in, const std::string& name, Fn&& fn) {
  std::string line;
  for (int no = 1; std::getline(in, line); ++no) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      fn(nlohmann::json::parse(line), no);
    } catch (const std::exception& e) {
      throw file_format_error(name + ":" + std::to_string(no) + ": " + e.what());
    }
  }
}

inline std::vector<DecompositionResult> read_results(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw file_format_error(path + ": cannot open");
  std::vector<DecompositionResult> out;
  for_each_jsonl(in, path, [&](const nlohmann::json& j, int) { out.push_back(result_from_json(j)); });
  return out;
}

/// Parse a whole JSON document, reporting the line of a syntax error.
inline nlohmann::json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw file_format_error(path + ": cannot open");
  const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    const std::size_t upto = std::min(e.byte, text.size());
    const auto line = 1 + std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(upto), '\n');
    throw file_format_error(path + ":" + std::to_string(line) + ": " + e.what());
  }
}

// ---------------------------------------------------------------------------
// Journal

inline nlohmann::json task_to_json(const TaskOutcome& t) {
  nlohmann::json j{{"structure_index", t.structure_index},
                   {"restart", t.restart},
                   {"seed", t.seed},
                   {"converged", t.converged},
                   {"fidelity", t.fidelity},
                   {"sweeps", t.sweeps}};
  if (t.converged) j["angles"] = t.angles;
  return j;
}

inline TaskOutcome task_from_json(const nlohmann::json& j) {
  TaskOutcome t;
  t.structure_index = j.at("structure_index").get<std::uint64_t>();
  t.restart = j.at("restart").get<int>();
  t.seed = j.at("seed").get<std::uint64_t>();
  t.converged = j.at("converged").get<bool>();
  t.fidelity = j.at("fidelity").get<double>();
  t.sweeps = j.at("sweeps").get<int>();
  if (t.converged) t.angles = j.at("angles").get<AngleVector>();
  return t;
}

/// Append-only record of finished tasks. The first line names the job's
/// config hash; resuming a journal written for another job is an error. A
/// torn final line (crash mid-write) is discarded and its task reruns.
class TaskJournal {
 public:
  TaskJournal(std::string path, const std::string& hash, bool resume) : path_(std::move(path)) {
    if (resume) load(hash);
    out_.open(path_, resume ? std::ios::app : std::ios::trunc);
    if (!out_) throw file_format_error(path_ + ": cannot open for writing");
    if (!resume || !header_seen_) {
      out_ << nlohmann::json{{"journal", 1}, {"config_hash", hash}}.dump() << '\n';
      out_.flush();
    }
  }

  std::size_t replayed() const noexcept { return done_.size(); }

  SearchHooks hooks() {
    SearchHooks h;
    h.lookup = [this](std::uint64_t s, int r) -> std::optional<TaskOutcome> {
      auto it = done_.find({s, r});
      if (it == done_.end()) return std::nullopt;
      return it->second;
    };
    h.on_task = [this](const TaskOutcome& t) {
      std::lock_guard lock(mu_);
      out_ << task_to_json(t).dump() << '\n';
      out_.flush();
    };
    return h;
  }

 private:
  void load(const std::string& hash) {
    std::ifstream in(path_, std::ios::binary);
    if (!in) return;
    const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    in.close();
    std::size_t pos = 0;
    for (int no = 1; pos < text.size(); ++no) {
      const std::size_t nl = text.find('\n', pos);
      if (nl == std::string::npos) {
        // Torn final line: drop it so appends start on a fresh line.
        std::filesystem::resize_file(path_, pos);
        break;
      }
      const std::string line = text.substr(pos, nl - pos);
      const std::string where = path_ + ":" + std::to_string(no) + ": ";
      pos = nl + 1;
      if (line.empty()) continue;
      nlohmann::json j;
      try {
        j = nlohmann::json::parse(line);
      } catch (const nlohmann::json::parse_error&) {
        throw file_format_error(where + "malformed journal line");
      }
      if (j.contains("journal")) {
        if (j.value("config_hash", "") != hash) throw file_format_error(where + "journal belongs to another job");
        header_seen_ = true;
        continue;
      }
      if (!header_seen_) throw file_format_error(where + "missing journal header");
      try {
        auto t = task_from_json(j);
        done_[{t.structure_index, t.restart}] = std::move(t);
      } catch (const std::exception& e) {
        throw file_format_error(where + e.what());
      }
    }
  }

  std::string path_;
  std::ofstream out_;
  std::mutex mu_;
  bool header_seen_ = false;
  std::map<std::pair<std::uint64_t, int>, TaskOutcome> done_;
};

// ---------------------------------------------------------------------------
// Manifest

inline nlohmann::json summary_to_json(const SearchSummary& s) {
  return {{"budget", {{"mode", std::string(to_string(s.budget.mode))}, {"value", s.budget.value}}},
          {"structures_tried", s.structures_tried},
          {"tasks_run", s.tasks_run},
          {"converged_tasks", s.converged_tasks},
          {"histogram", s.histogram},
          {"solved", s.solved},
          {"incomplete", s.incomplete}};
}

inline nlohmann::json make_manifest(const SearchJob& job, const std::vector<SearchOutcome>& rounds,
                                    std::string_view version) {
  nlohmann::json totals{{"rounds", nlohmann::json::array()}, {"results", 0}};
  std::size_t n = 0;
  for (const auto& r : rounds) {
    totals["rounds"].push_back(summary_to_json(r.summary));
    n += r.results.size();
  }
  totals["results"] = n;
  return {{"job", job_to_json(job)}, {"config_hash", config_hash(job)}, {"totals", totals}, {"version", version}};
}

}  // namespace qgd
