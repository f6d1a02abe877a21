#include "ugs/config.hpp"

#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace ugs {

namespace {

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

std::string unquote(const std::string& s) {
  if (s.size() >= 2 && (s.front() == '"' || s.front() == '\'') && s.back() == s.front())
    return s.substr(1, s.size() - 2);
  return s;
}

// Strips a trailing comment that is not inside quotes.
std::string strip_comment(const std::string& line) {
  char quote = 0;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quote) {
      if (c == quote) quote = 0;
    } else if (c == '"' || c == '\'') {
      quote = c;
    } else if (c == '#') {
      return line.substr(0, i);
    }
  }
  return line;
}

std::vector<std::string> split_items(const std::string& body) {
  std::vector<std::string> out;
  std::string cur;
  char quote = 0;
  for (char c : body) {
    if (quote) {
      if (c == quote) quote = 0;
      cur += c;
    } else if (c == '"' || c == '\'') {
      quote = c;
      cur += c;
    } else if (c == ',') {
      out.push_back(unquote(trim(cur)));
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!trim(cur).empty()) out.push_back(unquote(trim(cur)));
  return out;
}

double to_double(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    const double d = std::stod(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw ConfigError("'" + key + "': expected a number, got '" + v + "'");
  }
}

long long to_int(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    const long long x = std::stoll(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw ConfigError("'" + key + "': expected an integer, got '" + v + "'");
  }
}

std::uint64_t to_seed(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    if (!v.empty() && v.front() == '-') throw std::invalid_argument(v);
    const auto x = std::stoull(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw ConfigError("'" + key + "': expected a non-negative integer, got '" + v + "'");
  }
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  throw ConfigError("'" + key + "': expected true or false, got '" + v + "'");
}

const std::string& scalar(const std::string& key, const std::vector<std::string>& values) {
  if (values.size() != 1) throw ConfigError("'" + key + "' takes a single value");
  return values.front();
}

template <class F>
auto parse_or_config_error(const std::string& key, F&& f) {
  try {
    return f();
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError("'" + key + "': " + e.what());
  }
}

std::string join(const std::vector<std::string>& items) {
  std::string out = "[";
  for (std::size_t i = 0; i < items.size(); ++i) out += (i ? ", " : "") + items[i];
  return out + "]";
}

std::uint64_t fnv1a(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace

std::string_view to_string(Experiment e) {
  switch (e) {
    case Experiment::default_hp: return "default-hp";
    case Experiment::hpo: return "hpo";
    case Experiment::reduced_data: return "reduced-data";
    case Experiment::synthetic: return "synthetic";
    case Experiment::analyze: return "analyze";
  }
  return "?";
}

Experiment parse_experiment(std::string_view text) {
  for (auto e : {Experiment::default_hp, Experiment::hpo, Experiment::reduced_data, Experiment::synthetic,
                 Experiment::analyze})
    if (to_string(e) == text) return e;
  throw ConfigError("unknown experiment '" + std::string(text) +
                    "' (expected default-hp, hpo, reduced-data, synthetic or analyze)");
}

ConfigTable parse_config_text(const std::string& text) {
  ConfigTable table;
  std::istringstream in(text);
  std::string raw;
  std::size_t line_no = 0;
  std::string pending_key, pending_body;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string line = trim(strip_comment(raw));
    if (!pending_key.empty()) {
      pending_body += ' ' + line;
      if (!line.empty() && line.back() == ']') {
        table[pending_key] = split_items(pending_body.substr(0, pending_body.size() - 1));
        pending_key.clear();
      }
      continue;
    }
    if (line.empty()) continue;
    if (line.front() == '[') continue;  // section headers are accepted and ignored
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(line_no) + ": expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError("line " + std::to_string(line_no) + ": empty key");
    if (table.count(key)) throw ConfigError("line " + std::to_string(line_no) + ": duplicate key '" + key + "'");
    if (!value.empty() && value.front() == '[') {
      if (value.back() == ']') {
        table[key] = split_items(value.substr(1, value.size() - 2));
      } else {
        pending_key = key;
        pending_body = value.substr(1);
      }
    } else {
      table[key] = {unquote(value)};
    }
  }
  if (!pending_key.empty()) throw ConfigError("unterminated array for '" + pending_key + "'");
  return table;
}

std::vector<SynthSpec> synthetic_grid(const SynthSpec& base) {
  std::vector<SynthSpec> out;
  for (auto a : {PartitionSignal::distinct, PartitionSignal::random, PartitionSignal::null})
    for (auto f : {PartitionSignal::distinct, PartitionSignal::random, PartitionSignal::null}) {
      SynthSpec s = base;
      s.adj_mode = a;
      s.feat_mode = f;
      out.push_back(s);
    }
  return out;
}

std::vector<std::uint64_t> parse_seed_list(const std::string& text) {
  std::vector<std::uint64_t> out;
  for (const auto& item : split_items(text)) out.push_back(to_seed("seeds", item));
  if (out.empty()) throw ConfigError("seed list is empty");
  return out;
}

std::vector<double> parse_double_list(const std::string& text) {
  std::vector<double> out;
  for (const auto& item : split_items(text)) out.push_back(to_double("list", item));
  return out;
}

void ExperimentConfig::apply(const ConfigTable& table) {
  SynthSpec synth_base;
  std::vector<std::string> regimes;
  bool synth_given = false;

  for (const auto& [key, values] : table) {
    if (key == "experiment") {
      experiment = parse_experiment(scalar(key, values));
    } else if (key == "datasets") {
      datasets.assign(values.begin(), values.end());
    } else if (key == "synthetic") {
      regimes = values;
      synth_given = true;
    } else if (key == "synth_n") {
      synth_base.n_nodes = to_int(key, scalar(key, values));
    } else if (key == "synth_d") {
      synth_base.n_features = to_int(key, scalar(key, values));
    } else if (key == "synth_k") {
      synth_base.k = static_cast<int>(to_int(key, scalar(key, values)));
    } else if (key == "synth_seed") {
      synth_base.seed = to_seed(key, scalar(key, values));
    } else if (key == "synth_p_edge") {
      synth_base.p_edge_random = to_double(key, scalar(key, values));
    } else if (key == "synth_p_feat") {
      synth_base.p_feat_random = to_double(key, scalar(key, values));
    } else if (key == "models") {
      models.clear();
      for (const auto& v : values) models.push_back(parse_or_config_error(key, [&] { return parse_model(v); }));
    } else if (key == "seeds") {
      seeds.clear();
      for (const auto& v : values) seeds.push_back(to_seed(key, v));
    } else if (key == "selection_metrics") {
      selection_metrics.clear();
      for (const auto& v : values)
        selection_metrics.push_back(parse_or_config_error(key, [&] { return parse_metric(v); }));
    } else if (key == "edge_fractions") {
      edge_fractions.clear();
      for (const auto& v : values) edge_fractions.push_back(to_double(key, v));
    } else if (key == "output_dir") {
      output_dir = scalar(key, values);
    } else if (key == "workers") {
      workers = static_cast<int>(to_int(key, scalar(key, values)));
    } else if (key == "learning_rate") {
      base.hp.learning_rate = to_double(key, scalar(key, values));
    } else if (key == "weight_decay") {
      base.hp.weight_decay = to_double(key, scalar(key, values));
    } else if (key == "patience") {
      base.hp.patience = static_cast<int>(to_int(key, scalar(key, values)));
    } else if (key == "max_epochs") {
      base.hp.max_epochs = static_cast<int>(to_int(key, scalar(key, values)));
    } else if (key == "evaluation_interval") {
      base.evaluation_interval = static_cast<int>(to_int(key, scalar(key, values)));
    } else if (key == "hidden_dim") {
      base.hidden_dim = to_int(key, scalar(key, values));
    } else if (key == "n_layers") {
      base.n_layers = static_cast<int>(to_int(key, scalar(key, values)));
    } else if (key == "collapse_weight") {
      base.collapse_weight = to_double(key, scalar(key, values));
    } else if (key == "k") {
      base.k = static_cast<int>(to_int(key, scalar(key, values)));
    } else if (key == "stopping") {
      base.stopping = parse_or_config_error(key, [&] { return parse_stopping(scalar(key, values)); });
    } else if (key == "max_trials") {
      space.max_trials = static_cast<int>(to_int(key, scalar(key, values)));
    } else if (key == "search_learning_rates") {
      space.learning_rates.clear();
      for (const auto& v : values) space.learning_rates.push_back(to_double(key, v));
    } else if (key == "search_weight_decays") {
      space.weight_decays.clear();
      for (const auto& v : values) space.weight_decays.push_back(to_double(key, v));
    } else if (key == "search_patiences") {
      space.patiences.clear();
      for (const auto& v : values) space.patiences.push_back(static_cast<int>(to_int(key, v)));
    } else if (key == "tpe_gamma") {
      tpe.gamma = to_double(key, scalar(key, values));
    } else if (key == "tpe_startup") {
      tpe.n_startup = static_cast<int>(to_int(key, scalar(key, values)));
    } else if (key == "tpe_candidates") {
      tpe.n_candidates = static_cast<int>(to_int(key, scalar(key, values)));
    } else if (key == "tpe_skip_visited") {
      tpe.skip_visited = to_bool(key, scalar(key, values));
    } else if (key == "record_wall_time") {
      record_wall_time = to_bool(key, scalar(key, values));
    } else if (key == "save_checkpoints") {
      save_checkpoints = to_bool(key, scalar(key, values));
    } else {
      throw ConfigError("unknown key '" + key + "'");
    }
  }

  const bool synth_keys = table.count("synth_n") || table.count("synth_d") || table.count("synth_k") ||
                          table.count("synth_seed") || table.count("synth_p_edge") || table.count("synth_p_feat");
  if (synth_given || synth_keys || (experiment == Experiment::synthetic && synthetic.empty())) {
    if (!synth_given) regimes = {"grid"};
    synthetic.clear();
    for (const auto& r : regimes) {
      if (r == "grid") {
        for (const auto& s : synthetic_grid(synth_base)) synthetic.push_back(s);
        continue;
      }
      const auto slash = r.find('/');
      if (slash == std::string::npos)
        throw ConfigError("'synthetic': expected 'grid' or 'adj/feat', got '" + r + "'");
      SynthSpec s = synth_base;
      parse_or_config_error("synthetic", [&] {
        s.adj_mode = parse_signal(r.substr(0, slash));
        s.feat_mode = parse_signal(r.substr(slash + 1));
        return 0;
      });
      synthetic.push_back(s);
    }
  }
}

void ExperimentConfig::validate() const {
  if (experiment == Experiment::analyze)
    throw ConfigError("'analyze' is run with the analyze subcommand, not from a config file");
  if (seeds.empty()) throw ConfigError("seed list is empty");
  if (models.empty()) throw ConfigError("model list is empty");
  if (selection_metrics.empty()) throw ConfigError("selection metric list is empty");
  if (edge_fractions.empty()) throw ConfigError("edge fraction list is empty");
  if (datasets.empty() && synthetic.empty()) throw ConfigError("no datasets or synthetic specs given");
  for (const auto& d : datasets)
    if (!std::filesystem::is_directory(d)) throw ConfigError("dataset directory does not exist: " + d.string());
  for (double f : edge_fractions)
    if (!(f > 0.0 && f <= 1.0)) throw ConfigError("edge fraction must lie in (0, 1], got " + format_number(f));
  for (const auto& s : synthetic) parse_or_config_error("synthetic", [&] { s.validate(); return 0; });
  if (workers < 0) throw ConfigError("workers must be >= 0");
  if (space.max_trials < 1) throw ConfigError("max_trials must be >= 1");
  if (space.grid_size() == 0) throw ConfigError("search space is empty");
  if (!(tpe.gamma > 0.0 && tpe.gamma <= 1.0)) throw ConfigError("tpe_gamma must lie in (0, 1]");
  for (const auto m : selection_metrics)
    if (is_supervised(m))
      throw ConfigError("selection metric '" + std::string(to_string(m)) + "' needs labels; use modularity or conductance");
  parse_or_config_error("run", [&] {
    RunConfig probe = base;
    probe.dataset = "probe";
    probe.validate();
    return 0;
  });
}

std::string ExperimentConfig::canonical() const {
  std::vector<std::string> items;
  std::ostringstream out;
  out << "experiment = " << to_string(experiment) << '\n';
  for (const auto& d : datasets) items.push_back(d.generic_string());
  out << "datasets = " << join(items) << '\n';
  items.clear();
  for (const auto& s : synthetic)
    items.push_back(s.dataset_name() + ":n" + std::to_string(s.n_nodes) + ":d" + std::to_string(s.n_features) +
                    ":k" + std::to_string(s.k) + ":pe" + format_number(s.p_edge_random) + ":pf" +
                    format_number(s.p_feat_random) + ":s" + std::to_string(s.seed));
  out << "synthetic = " << join(items) << '\n';
  items.clear();
  for (auto m : models) items.emplace_back(to_string(m));
  out << "models = " << join(items) << '\n';
  items.clear();
  for (auto s : seeds) items.push_back(std::to_string(s));
  out << "seeds = " << join(items) << '\n';
  items.clear();
  for (auto m : selection_metrics) items.emplace_back(to_string(m));
  out << "selection_metrics = " << join(items) << '\n';
  items.clear();
  for (auto f : edge_fractions) items.push_back(format_number(f));
  out << "edge_fractions = " << join(items) << '\n';
  out << "learning_rate = " << format_number(base.hp.learning_rate) << '\n';
  out << "weight_decay = " << format_number(base.hp.weight_decay) << '\n';
  out << "patience = " << base.hp.patience << '\n';
  out << "max_epochs = " << base.hp.max_epochs << '\n';
  out << "evaluation_interval = " << base.evaluation_interval << '\n';
  out << "hidden_dim = " << base.hidden_dim << '\n';
  out << "n_layers = " << base.n_layers << '\n';
  out << "collapse_weight = " << format_number(base.collapse_weight) << '\n';
  out << "k = " << base.k << '\n';
  out << "stopping = " << to_string(base.stopping) << '\n';
  if (experiment == Experiment::hpo) {
    out << "max_trials = " << space.max_trials << '\n';
    items.clear();
    for (auto v : space.learning_rates) items.push_back(format_number(v));
    out << "search_learning_rates = " << join(items) << '\n';
    items.clear();
    for (auto v : space.weight_decays) items.push_back(format_number(v));
    out << "search_weight_decays = " << join(items) << '\n';
    items.clear();
    for (auto v : space.patiences) items.push_back(std::to_string(v));
    out << "search_patiences = " << join(items) << '\n';
    out << "tpe_gamma = " << format_number(tpe.gamma) << '\n';
    out << "tpe_startup = " << tpe.n_startup << '\n';
    out << "tpe_candidates = " << tpe.n_candidates << '\n';
    out << "tpe_skip_visited = " << (tpe.skip_visited ? "true" : "false") << '\n';
  }
  out << "record_wall_time = " << (record_wall_time ? "true" : "false") << '\n';
  out << "save_checkpoints = " << (save_checkpoints ? "true" : "false") << '\n';
  return out.str();
}

std::string ExperimentConfig::hash() const {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a(canonical())));
  return buf;
}

std::filesystem::path ExperimentConfig::results_dir() const {
  return output_dir / (std::string(to_string(experiment)) + "-" + hash());
}

int ExperimentConfig::effective_workers() const { return workers > 0 ? workers : default_worker_count(); }

ExperimentConfig config_from_text(const std::string& text) {
  const ConfigTable table = parse_config_text(text);
  ExperimentConfig cfg;
  if (const auto it = table.find("experiment"); it != table.end())
    cfg.experiment = parse_experiment(scalar("experiment", it->second));
  if (cfg.experiment == Experiment::reduced_data) cfg.edge_fractions = {0.33, 0.66};
  cfg.apply(table);
  if (const char* env = std::getenv("UGS_SEED"); env && *env) cfg.seeds = parse_seed_list(env);
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return config_from_text(buf.str());
}

}  // namespace ugs
