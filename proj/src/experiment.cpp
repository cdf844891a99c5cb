// Copyright 2026 The risnoma Authors
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

#include "risnoma/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>
#include <thread>

#include "risnoma/json_io.hpp"

namespace risnoma::experiment {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) out.push_back(trim(cur));
  return out;
}

double parse_double(const std::string& key, const std::string& s) {
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &pos);
  } catch (const std::exception&) {
    throw ConfigError(key + ": not a number: '" + s + "'");
  }
  if (pos != s.size() || !std::isfinite(v)) throw ConfigError(key + ": not a finite number: '" + s + "'");
  return v;
}

double as_double(const std::string& key, const json& v) {
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) return parse_double(key, trim(v.get<std::string>()));
  throw ConfigError(key + ": expected a number");
}

long long as_int(const std::string& key, const json& v) {
  const double d = as_double(key, v);
  if (d != std::floor(d) || std::abs(d) > 9e15) throw ConfigError(key + ": expected an integer");
  return static_cast<long long>(d);
}

std::uint64_t as_u64(const std::string& key, const json& v) {
  if (v.is_number_unsigned()) return v.get<std::uint64_t>();
  if (v.is_number_integer() && v.get<long long>() >= 0) return static_cast<std::uint64_t>(v.get<long long>());
  if (v.is_string()) {
    const std::string s = trim(v.get<std::string>());
    std::size_t pos = 0;
    try {
      if (!s.empty() && s[0] != '-') {
        const auto r = std::stoull(s, &pos, 0);
        if (pos == s.size()) return r;
      }
    } catch (const std::exception&) {
    }
  }
  throw ConfigError(key + ": expected a non-negative 64-bit integer");
}

std::string as_string(const std::string& key, const json& v) {
  if (v.is_string()) return trim(v.get<std::string>());
  throw ConfigError(key + ": expected a string");
}

std::vector<json> as_list(const json& v) {
  if (v.is_array()) return {v.begin(), v.end()};
  if (v.is_string()) {
    std::vector<json> out;
    for (const auto& part : split(v.get<std::string>(), ',')) out.emplace_back(part);
    return out;
  }
  return {v};
}

std::vector<double> as_power_grid(const std::string& key, const json& v) {
  if (v.is_string() && v.get<std::string>().find(':') != std::string::npos) {
    const auto parts = split(v.get<std::string>(), ':');
    if (parts.size() != 3) throw ConfigError(key + ": range must be start:step:stop");
    const double a = parse_double(key, parts[0]), st = parse_double(key, parts[1]), b = parse_double(key, parts[2]);
    if (!(st > 0.0) || b < a) throw ConfigError(key + ": range needs step > 0 and stop >= start");
    std::vector<double> out;
    const long long n = static_cast<long long>(std::floor((b - a) / st + 1e-9));
    for (long long k = 0; k <= n; ++k) out.push_back(a + static_cast<double>(k) * st);
    return out;
  }
  std::vector<double> out;
  for (const auto& e : as_list(v)) out.push_back(as_double(key, e));
  return out;
}

channel::Point as_point(const std::string& key, const json& v) {
  const auto l = as_list(v);
  if (l.size() != 3) throw ConfigError(key + ": expected three coordinates");
  return {as_double(key, l[0]), as_double(key, l[1]), as_double(key, l[2])};
}

double dbm_to_watt(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }

void apply(ExperimentConfig& c, const std::string& key, const json& v) {
  auto& p = c.params;
  auto& f = c.fading;
  auto& pen = c.ao.penalty;
  if (key == "n_antennas") p.n_antennas = static_cast<int>(as_int(key, v));
  else if (key == "m_elements") p.m_elements = static_cast<int>(as_int(key, v));
  else if (key == "noise_dbm") p.sigma1_sq = p.sigma2_sq = dbm_to_watt(as_double(key, v));
  else if (key == "sigma1_sq") p.sigma1_sq = as_double(key, v);
  else if (key == "sigma2_sq") p.sigma2_sq = as_double(key, v);
  else if (key == "eta") p.eta = as_double(key, v);
  else if (key == "gamma2") p.gamma2 = as_double(key, v);
  else if (key == "eps_feas") p.eps_feas = as_double(key, v);
  else if (key == "power_grid_dbm") c.power_grid_dbm = as_power_grid(key, v);
  else if (key == "realizations") c.realizations = static_cast<int>(as_int(key, v));
  else if (key == "schemes") {
    c.schemes.clear();
    for (const auto& e : as_list(v)) c.schemes.push_back(scheme_from_string(as_string(key, e)));
  } else if (key == "base_seed") c.base_seed = as_u64(key, v);
  else if (key == "output_dir") c.output_dir = as_string(key, v);
  else if (key == "threads") c.threads = static_cast<int>(as_int(key, v));
  else if (key == "ap") c.geometry.ap = as_point(key, v);
  else if (key == "ris") c.geometry.ris = as_point(key, v);
  else if (key == "u1") c.geometry.u1 = as_point(key, v);
  else if (key == "u2") c.geometry.u2 = as_point(key, v);
  else if (key == "alpha_ap_u1") f.alpha_direct_ap_u1 = as_double(key, v);
  else if (key == "alpha_u1_u2") f.alpha_u1_u2 = as_double(key, v);
  else if (key == "alpha_ap_u2") f.alpha_ap_u2 = as_double(key, v);
  else if (key == "alpha_ris") f.alpha_ris = as_double(key, v);
  else if (key == "rician_k") f.rician_k = as_double(key, v);
  else if (key == "pl_ref_db") f.pl_ref_db = as_double(key, v);
  else if (key == "init_mode") {
    try {
      c.ao.init_mode = ao::init_mode_from_string(as_string(key, v));
    } catch (const ConfigError& e) {
      throw ConfigError(key + ": " + e.what());
    }
  } else if (key == "max_outer") c.ao.max_outer = static_cast<int>(as_int(key, v));
  else if (key == "ao_tol") c.ao.tol = as_double(key, v);
  else if (key == "max_retries") c.ao.max_retries = static_cast<int>(as_int(key, v));
  else if (key == "pbagm_c0_factor") pen.c0_factor = as_double(key, v);
  else if (key == "pbagm_rho") pen.rho = as_double(key, v);
  else if (key == "pbagm_eps") pen.eps = as_double(key, v);
  else if (key == "pbagm_max_iter") pen.max_iter = static_cast<int>(as_int(key, v));
  else throw ConfigError("unknown key '" + key + "'");
}

std::string num(double v) {
  if (std::isnan(v)) return "";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string stamp(const ExperimentConfig& cfg) {
  const auto& p = cfg.params;
  std::ostringstream o;
  o << "# eta=" << num(p.eta) << " gamma2=" << num(p.gamma2) << " n_antennas=" << p.n_antennas
    << " m_elements=" << p.m_elements << " sigma1_sq=" << num(p.sigma1_sq) << " sigma2_sq=" << num(p.sigma2_sq)
    << " init_mode=" << ao::to_string(cfg.ao.init_mode) << " base_seed=" << cfg.base_seed << "\n";
  return o.str();
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << content;
  out.close();
  if (!out) throw IoError("write to '" + path.string() + "' failed");
}

void make_dirs(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw IoError("cannot create directory '" + dir.string() + "'");
}

int scheme_index(const ExperimentConfig& cfg, Scheme s) {
  return static_cast<int>(std::find(cfg.schemes.begin(), cfg.schemes.end(), s) - cfg.schemes.begin());
}

void write_traces(const ExperimentConfig& cfg, const std::vector<RunRecord>& recs, const fs::path& dir) {
  make_dirs(dir);
  std::map<std::pair<std::uint64_t, int>, json> files;
  for (const auto& r : recs) {
    auto& j = files[{r.seed, scheme_index(cfg, r.scheme)}];
    if (j.is_null()) {
      j = {{"seed", r.seed}, {"scheme", to_string(r.scheme)}, {"params", cfg.params},
           {"init_mode", ao::to_string(cfg.ao.init_mode)}, {"runs", json::array()}};
      j["params"].erase("p_s");
    }
    json run = {{"power_dbm", r.power_dbm}, {"status", r.status}, {"result", r.result}};
    if (!r.error.empty()) run["error"] = r.error;
    j["runs"].push_back(std::move(run));
  }
  for (const auto& [key, j] : files) {
    const std::string name = std::to_string(key.first) + "_" + to_string(cfg.schemes[key.second]) + ".json";
    write_file(dir / name, j.dump(1) + "\n");
  }
}

}  // namespace

std::string to_string(Scheme s) {
  switch (s) {
    case Scheme::Proposed: return "proposed";
    case Scheme::RandomPhase: return "random_phase";
    case Scheme::WithoutRis: return "without_ris";
  }
  return "?";
}

Scheme scheme_from_string(const std::string& s) {
  if (s == "proposed") return Scheme::Proposed;
  if (s == "random_phase") return Scheme::RandomPhase;
  if (s == "without_ris") return Scheme::WithoutRis;
  throw ConfigError("unknown scheme '" + s + "' (proposed, random_phase, without_ris)");
}

void ExperimentConfig::validate() const {
  if (power_grid_dbm.empty()) throw ConfigError("power grid is empty");
  for (double d : power_grid_dbm)
    if (!std::isfinite(d)) throw ConfigError("power grid has a non-finite entry");
  if (realizations < 1) throw ConfigError("realizations must be >= 1");
  if (schemes.empty()) throw ConfigError("no scheme selected");
  for (std::size_t i = 0; i < schemes.size(); ++i)
    for (std::size_t k = i + 1; k < schemes.size(); ++k)
      if (schemes[i] == schemes[k]) throw ConfigError("scheme '" + to_string(schemes[i]) + "' listed twice");
  if (params.n_antennas < 1) throw ConfigError("n_antennas must be >= 1");
  if (params.m_elements < 0) throw ConfigError("m_elements must be >= 0");
  try {
    SystemParams p = params;
    p.p_s = 1.0;
    p.validate();
    geometry.validate();
    fading.validate();
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
  if (ao.max_outer < 1) throw ConfigError("max_outer must be >= 1");
  if (!(ao.tol > 0.0)) throw ConfigError("ao_tol must be > 0");
  if (ao.max_retries < 0) throw ConfigError("max_retries must be >= 0");
  const auto& pen = ao.penalty;
  if (!(pen.c0_factor > 0.0)) throw ConfigError("pbagm_c0_factor must be > 0");
  if (!(pen.rho > 1.0)) throw ConfigError("pbagm_rho must be > 1");
  if (!(pen.eps > 0.0)) throw ConfigError("pbagm_eps must be > 0");
  if (pen.max_iter < 1) throw ConfigError("pbagm_max_iter must be >= 1");
  if (threads < 0) throw ConfigError("threads must be >= 0");
}

ExperimentConfig parse_config_text(const std::string& text) {
  ExperimentConfig c;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
    apply(c, trim(line.substr(0, eq)), json(trim(line.substr(eq + 1))));
  }
  c.validate();
  return c;
}

ExperimentConfig parse_config_json(const json& j) {
  if (!j.is_object()) throw ConfigError("JSON config must be an object");
  ExperimentConfig c;
  for (const auto& [k, v] : j.items()) apply(c, k, v);
  c.validate();
  return c;
}

ExperimentConfig load_config(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  const std::string text = ss.str();
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') {
    json j;
    try {
      j = json::parse(text);
    } catch (const json::parse_error& e) {
      throw ConfigError(std::string("JSON config: ") + e.what());
    }
    return parse_config_json(j);
  }
  return parse_config_text(text);
}

json config_to_json(const ExperimentConfig& cfg) {
  const auto pt = [](const channel::Point& p) { return json::array({p[0], p[1], p[2]}); };
  json schemes = json::array();
  for (auto s : cfg.schemes) schemes.push_back(to_string(s));
  const auto& p = cfg.params;
  const auto& f = cfg.fading;
  const auto& pen = cfg.ao.penalty;
  return {{"n_antennas", p.n_antennas}, {"m_elements", p.m_elements}, {"sigma1_sq", p.sigma1_sq},
          {"sigma2_sq", p.sigma2_sq}, {"eta", p.eta}, {"gamma2", p.gamma2}, {"eps_feas", p.eps_feas},
          {"power_grid_dbm", cfg.power_grid_dbm}, {"realizations", cfg.realizations}, {"schemes", schemes},
          {"base_seed", cfg.base_seed}, {"output_dir", cfg.output_dir}, {"threads", cfg.threads},
          {"ap", pt(cfg.geometry.ap)}, {"ris", pt(cfg.geometry.ris)}, {"u1", pt(cfg.geometry.u1)},
          {"u2", pt(cfg.geometry.u2)}, {"alpha_ap_u1", f.alpha_direct_ap_u1}, {"alpha_u1_u2", f.alpha_u1_u2},
          {"alpha_ap_u2", f.alpha_ap_u2}, {"alpha_ris", f.alpha_ris}, {"rician_k", f.rician_k},
          {"pl_ref_db", f.pl_ref_db}, {"init_mode", ao::to_string(cfg.ao.init_mode)},
          {"max_outer", cfg.ao.max_outer}, {"ao_tol", cfg.ao.tol}, {"max_retries", cfg.ao.max_retries},
          {"pbagm_c0_factor", pen.c0_factor}, {"pbagm_rho", pen.rho}, {"pbagm_eps", pen.eps},
          {"pbagm_max_iter", pen.max_iter}};
}

std::uint64_t realization_seed(std::uint64_t base, int r) { return base ^ static_cast<std::uint64_t>(r); }

RunRecord run_one(const ExperimentConfig& cfg, const ChannelSet& ch, double power_dbm, std::uint64_t seed,
                  Scheme scheme) {
  RunRecord rec;
  rec.power_dbm = power_dbm;
  rec.seed = seed;
  rec.scheme = scheme;
  SystemParams p = cfg.params;
  p.p_s = dbm_to_watt(power_dbm);
  const auto t0 = std::chrono::steady_clock::now();
  try {
    switch (scheme) {
      case Scheme::Proposed: {
        ao::AoOptions o = cfg.ao;
        o.seed = seed;
        rec.result = ao::solve_ao(ch, p, o);
        break;
      }
      case Scheme::RandomPhase: rec.result = ao::solve_random_phase(ch, p, seed, cfg.ao.bf); break;
      case Scheme::WithoutRis: rec.result = ao::solve_without_ris(ch, p, cfg.ao.bf); break;
    }
    rec.status = ao::to_string(rec.result.status);
  } catch (const std::exception& e) {
    rec.result = ao::AoResult{};
    rec.result.rate = kNaN;
    rec.status = "error";
    rec.error = e.what();
  }
  rec.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return rec;
}

std::vector<RunRecord> run_records(const ExperimentConfig& cfg) {
  cfg.validate();
  const int np = static_cast<int>(cfg.power_grid_dbm.size());
  const int nr = cfg.realizations;
  const int ns = static_cast<int>(cfg.schemes.size());
  std::vector<RunRecord> out(static_cast<std::size_t>(np) * nr * ns);
  // one task per realization: the channel is shared by every power and scheme
  std::atomic<int> next{0};
  const auto work = [&] {
    for (int r = next++; r < nr; r = next++) {
      const std::uint64_t seed = realization_seed(cfg.base_seed, r);
      const ChannelSet ch = channel::sample_channels(cfg.geometry, cfg.fading, cfg.params, seed);
      for (int pi = 0; pi < np; ++pi)
        for (int si = 0; si < ns; ++si)
          out[(static_cast<std::size_t>(pi) * nr + r) * ns + si] =
              run_one(cfg, ch, cfg.power_grid_dbm[pi], seed, cfg.schemes[si]);
    }
  };
  int threads = cfg.threads > 0 ? cfg.threads : static_cast<int>(std::thread::hardware_concurrency());
  threads = std::clamp(threads, 1, nr);
  if (threads == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(work);
  }
  return out;
}

std::vector<SummaryRow> summarize(const ExperimentConfig& cfg, const std::vector<RunRecord>& recs) {
  std::vector<SummaryRow> rows;
  for (double pw : cfg.power_grid_dbm) {
    for (Scheme s : cfg.schemes) {
      SummaryRow row;
      row.power_dbm = pw;
      row.scheme = s;
      double sum = 0.0, iters = 0.0;
      for (const auto& r : recs) {
        if (r.power_dbm != pw || r.scheme != s) continue;
        ++row.runs;
        if (r.result.feasible) {
          ++row.feasible;
          sum += r.result.rate;
          iters += r.result.iterations;
        }
      }
      row.feasible_prob = row.runs ? static_cast<double>(row.feasible) / row.runs : 0.0;
      row.mean_rate_conditional = row.feasible ? sum / row.feasible : kNaN;
      row.mean_rate_zero_fill = row.runs ? sum / row.runs : kNaN;
      row.mean_outer_iters = row.feasible ? iters / row.feasible : kNaN;
      rows.push_back(row);
    }
  }
  return rows;
}

SweepOutput run_sweep(const ExperimentConfig& cfg) {
  cfg.validate();
  const fs::path dir(cfg.output_dir);
  make_dirs(dir);
  SweepOutput res;
  res.records = run_records(cfg);
  res.summary = summarize(cfg, res.records);

  std::ostringstream detail, timing, summary;
  detail << "# risnoma sweep: one row per (power, seed, scheme); rate_u1 is empty for infeasible runs\n"
         << stamp(cfg) << "power_dbm,seed,scheme,feasible,rate_u1,outer_iters,status,retries\n";
  timing << "# wall-clock time per run, not reproducible\n" << stamp(cfg) << "power_dbm,seed,scheme,wall_ms\n";
  for (const auto& r : res.records) {
    detail << num(r.power_dbm) << ',' << r.seed << ',' << to_string(r.scheme) << ',' << (r.result.feasible ? 1 : 0)
           << ',' << (r.result.feasible ? num(r.result.rate) : "") << ',' << r.result.iterations << ',' << r.status
           << ',' << r.result.retries << '\n';
    timing << num(r.power_dbm) << ',' << r.seed << ',' << to_string(r.scheme) << ',' << num(r.wall_ms) << '\n';
  }
  summary << "# mean_rate_conditional averages feasible runs only; mean_rate_zero_fill counts infeasible runs as 0\n"
          << stamp(cfg)
          << "power_dbm,scheme,runs,feasible,feasible_prob,mean_rate_conditional,mean_rate_zero_fill,"
             "mean_outer_iters\n";
  for (const auto& s : res.summary) {
    summary << num(s.power_dbm) << ',' << to_string(s.scheme) << ',' << s.runs << ',' << s.feasible << ','
            << num(s.feasible_prob) << ',' << num(s.mean_rate_conditional) << ',' << num(s.mean_rate_zero_fill)
            << ',' << num(s.mean_outer_iters) << '\n';
  }
  write_file(dir / "detail.csv", detail.str());
  write_file(dir / "summary.csv", summary.str());
  write_file(dir / "timing.csv", timing.str());
  write_traces(cfg, res.records, dir / "traces");
  return res;
}

std::vector<RunRecord> run_convergence(const ExperimentConfig& cfg, double power_dbm) {
  ExperimentConfig c = cfg;
  c.power_grid_dbm = {power_dbm};
  c.validate();
  const fs::path dir(c.output_dir);
  make_dirs(dir);
  auto recs = run_records(c);

  // baselines are single-shot: their rate is repeated for as many
  // iterations as the proposed run on the same seed took
  std::map<std::uint64_t, int> span;
  for (const auto& r : recs)
    if (r.scheme == Scheme::Proposed && r.result.feasible) span[r.seed] = r.result.iterations;
  std::ostringstream out;
  out << "# per-iteration rate at power_dbm=" << num(power_dbm) << "; infeasible runs have no rows\n"
      << stamp(c) << "seed,scheme,iteration,rate_u1\n";
  for (const auto& r : recs) {
    if (!r.result.feasible) continue;
    const auto& tr = r.result.objective_trace;
    const int n = r.scheme == Scheme::Proposed ? static_cast<int>(tr.size())
                                               : std::max(1, span.count(r.seed) ? span[r.seed] : 1);
    for (int k = 0; k < n; ++k) {
      const double v = r.scheme == Scheme::Proposed ? tr[k] : tr.front();
      out << r.seed << ',' << to_string(r.scheme) << ',' << k + 1 << ',' << num(v) << '\n';
    }
  }
  write_file(dir / "convergence.csv", out.str());
  write_traces(c, recs, dir / "traces");
  return recs;
}

}  // namespace risnoma::experiment
