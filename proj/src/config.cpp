#include "tnprep/config.hpp"

#include <set>
#include <sstream>

namespace tnprep {

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

long long to_int(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const long long x = std::stoll(v, &pos);
    if (pos != v.size()) throw std::invalid_argument("");
    return x;
  } catch (const std::exception&) {
    throw ConfigError("config: " + key + ": expected an integer, got '" + v +
                      "'");
  }
}

double to_real(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const double x = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument("");
    return x;
  } catch (const std::exception&) {
    throw ConfigError("config: " + key + ": expected a number, got '" + v +
                      "'");
  }
}

std::uint64_t to_u64(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const unsigned long long x = std::stoull(v, &pos);
    if (pos != v.size() || v.find('-') != std::string::npos)
      throw std::invalid_argument("");
    return x;
  } catch (const std::exception&) {
    throw ConfigError("config: " + key + ": expected an unsigned integer, "
                      "got '" + v + "'");
  }
}

std::vector<std::string> split_list(const std::string& v) {
  std::vector<std::string> out;
  std::string cur;
  for (const char ch : v) {
    if (ch == ',') {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur += ch;
    }
  }
  out.push_back(trim(cur));
  return out;
}

void require(bool ok, const std::string& key, const char* what) {
  if (!ok) throw ConfigError("config: " + key + ": " + what);
}

}  // namespace

PipelineConfig parse_config_text(const std::string& text) {
  PipelineConfig cfg;
  std::istringstream in(text);
  std::string line;
  std::set<std::string> seen;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(lineno) +
                        ": expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty())
      throw ConfigError("config line " + std::to_string(lineno) +
                        ": empty key or value");
    if (!seen.insert(key).second)
      throw ConfigError("config: duplicate key '" + key + "'");

    if (key == "paths.hamiltonian") {
      cfg.hamiltonian_file = value;
    } else if (key == "paths.out_dir") {
      cfg.out_dir = value;
    } else if (key == "paths.db_cache") {
      cfg.db_cache = value;
    } else if (key == "dmrg.chi_max") {
      cfg.dmrg.chi_max = static_cast<int>(to_int(key, value));
      require(cfg.dmrg.chi_max >= 2, key, "must be >= 2");
    } else if (key == "dmrg.sv_tol") {
      cfg.dmrg.sv_tol = to_real(key, value);
      require(cfg.dmrg.sv_tol >= 0.0, key, "must be >= 0");
    } else if (key == "dmrg.max_sweeps") {
      cfg.dmrg.max_sweeps = static_cast<int>(to_int(key, value));
      require(cfg.dmrg.max_sweeps >= 1, key, "must be >= 1");
    } else if (key == "dmrg.energy_rtol") {
      cfg.dmrg.energy_rtol = to_real(key, value);
      require(cfg.dmrg.energy_rtol > 0.0, key, "must be > 0");
    } else if (key == "dmrg.penalty_weight_mev") {
      cfg.dmrg.penalty_weight_mev = to_real(key, value);
      require(cfg.dmrg.penalty_weight_mev >= 0.0, key, "must be >= 0");
    } else if (key == "dmrg.lanczos_dim") {
      cfg.dmrg.lanczos_dim = static_cast<int>(to_int(key, value));
      require(cfg.dmrg.lanczos_dim >= 2, key, "must be >= 2");
    } else if (key == "dmrg.leakage_tol") {
      cfg.dmrg.leakage_tol = to_real(key, value);
      require(cfg.dmrg.leakage_tol > 0.0, key, "must be > 0");
    } else if (key == "dmrg.number_penalty_kappa") {
      cfg.dmrg.number_penalty_kappa = to_real(key, value);
      require(cfg.dmrg.number_penalty_kappa >= 0.0, key, "must be >= 0");
    } else if (key == "dmrg.n_states") {
      cfg.n_states = static_cast<int>(to_int(key, value));
      require(cfg.n_states >= 1, key, "must be >= 1");
    } else if (key == "sector.protons") {
      cfg.sector.n_protons = static_cast<int>(to_int(key, value));
      require(cfg.sector.n_protons >= 0, key, "must be >= 0");
      cfg.has_sector = true;
    } else if (key == "sector.neutrons") {
      cfg.sector.n_neutrons = static_cast<int>(to_int(key, value));
      require(cfg.sector.n_neutrons >= 0, key, "must be >= 0");
      cfg.has_sector = true;
    } else if (key == "compress.chi") {
      cfg.compress_chi = static_cast<int>(to_int(key, value));
      require(cfg.compress_chi >= 1, key, "must be >= 1");
    } else if (key == "compress.reverse_chis") {
      cfg.reverse_chis.clear();
      for (const auto& tok : split_list(value)) {
        const int chi = static_cast<int>(to_int(key, tok));
        require(chi >= 1, key, "chis must be >= 1");
        require(cfg.reverse_chis.empty() || chi < cfg.reverse_chis.back(), key,
                "must be strictly decreasing");
        cfg.reverse_chis.push_back(chi);
      }
    } else if (key == "compile.max_layers") {
      cfg.max_layers = static_cast<int>(to_int(key, value));
      require(cfg.max_layers >= 1, key, "must be >= 1");
    } else if (key == "compile.rel_tol") {
      cfg.rel_tol = to_real(key, value);
      require(cfg.rel_tol > 0.0, key, "must be > 0");
    } else if (key == "compile.chi_env") {
      cfg.chi_env = static_cast<int>(to_int(key, value));
      require(cfg.chi_env >= 0, key, "must be >= 0");
    } else if (key == "synth.eps_list") {
      cfg.eps_list.clear();
      for (const auto& tok : split_list(value)) {
        const double eps = to_real(key, tok);
        require(eps > 0.0 && eps < 1.0, key, "eps values must be in (0, 1)");
        cfg.eps_list.push_back(eps);
      }
    } else if (key == "synth.strategy") {
      if (value == "RZ_ONLY")
        cfg.strategy = SynthesisStrategy::kRzOnly;
      else if (value == "HYBRID")
        cfg.strategy = SynthesisStrategy::kHybrid;
      else
        throw ConfigError("config: synth.strategy: expected RZ_ONLY or "
                          "HYBRID, got '" + value + "'");
    } else if (key == "synth.t_budget") {
      cfg.t_budget = static_cast<int>(to_int(key, value));
      require(cfg.t_budget >= 0 && cfg.t_budget <= 14, key,
              "must be in 0..14");
    } else if (key == "seed") {
      cfg.seed = to_u64(key, value);
    } else {
      throw ConfigError("config: unknown key '" + key + "'");
    }
  }
  return cfg;
}

PipelineConfig load_config(const std::string& path) {
  return parse_config_text(read_text_file(path));
}

std::string serialize_config(const PipelineConfig& c) {
  std::string s;
  if (!c.hamiltonian_file.empty())
    s += "paths.hamiltonian = " + c.hamiltonian_file + "\n";
  s += "paths.out_dir = " + c.out_dir + "\n";
  if (!c.db_cache.empty()) s += "paths.db_cache = " + c.db_cache + "\n";
  s += "dmrg.chi_max = " + std::to_string(c.dmrg.chi_max) + "\n";
  s += "dmrg.sv_tol = " + fmt_g17(c.dmrg.sv_tol) + "\n";
  s += "dmrg.max_sweeps = " + std::to_string(c.dmrg.max_sweeps) + "\n";
  s += "dmrg.energy_rtol = " + fmt_g17(c.dmrg.energy_rtol) + "\n";
  s += "dmrg.penalty_weight_mev = " + fmt_g17(c.dmrg.penalty_weight_mev) +
       "\n";
  s += "dmrg.lanczos_dim = " + std::to_string(c.dmrg.lanczos_dim) + "\n";
  s += "dmrg.leakage_tol = " + fmt_g17(c.dmrg.leakage_tol) + "\n";
  s += "dmrg.number_penalty_kappa = " + fmt_g17(c.dmrg.number_penalty_kappa) +
       "\n";
  s += "dmrg.n_states = " + std::to_string(c.n_states) + "\n";
  if (c.has_sector) {
    s += "sector.protons = " + std::to_string(c.sector.n_protons) + "\n";
    s += "sector.neutrons = " + std::to_string(c.sector.n_neutrons) + "\n";
  }
  s += "compress.chi = " + std::to_string(c.compress_chi) + "\n";
  s += "compress.reverse_chis = ";
  for (std::size_t k = 0; k < c.reverse_chis.size(); ++k)
    s += (k ? "," : "") + std::to_string(c.reverse_chis[k]);
  s += "\n";
  s += "compile.max_layers = " + std::to_string(c.max_layers) + "\n";
  s += "compile.rel_tol = " + fmt_g17(c.rel_tol) + "\n";
  s += "compile.chi_env = " + std::to_string(c.chi_env) + "\n";
  s += "synth.eps_list = ";
  for (std::size_t k = 0; k < c.eps_list.size(); ++k)
    s += (k ? "," : "") + fmt_g17(c.eps_list[k]);
  s += "\n";
  s += std::string("synth.strategy = ") +
       (c.strategy == SynthesisStrategy::kRzOnly ? "RZ_ONLY" : "HYBRID") +
       "\n";
  s += "synth.t_budget = " + std::to_string(c.t_budget) + "\n";
  s += "seed = " + std::to_string(c.seed) + "\n";
  return s;
}

}  // namespace tnprep
