#include "sauna/config.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "sauna/csv.hpp"
#include "sauna/envs.hpp"

namespace sauna {

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1" || value == "on" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "off" || value == "no") return false;
  throw std::invalid_argument("config: '" + key + "' expects a boolean, got '" +
                              value + "'");
}

long parse_long(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    long out = std::stol(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return out;
  } catch (const std::exception&) {
    throw std::invalid_argument("config: '" + key + "' expects an integer, got '" +
                                value + "'");
  }
}

double parse_real(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    double out = std::stod(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return out;
  } catch (const std::exception&) {
    throw std::invalid_argument("config: '" + key + "' expects a number, got '" +
                                value + "'");
  }
}

template <typename T, typename Parse>
std::vector<T> parse_list(const std::string& key, const std::string& value,
                          Parse parse) {
  std::vector<T> out;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(static_cast<T>(parse(key, item)));
  }
  if (out.empty()) {
    throw std::invalid_argument("config: '" + key + "' expects a nonempty list");
  }
  return out;
}

template <typename T>
std::string join_list(const std::vector<T>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i > 0) out += ",";
    out += std::to_string(values[i]);
  }
  return out;
}

}  // namespace

const std::vector<std::string>& ExperimentConfig::keys() {
  static const std::vector<std::string> k = {
      "env", "variant", "seeds", "total_steps", "eval_every", "eval_episodes",
      "output_dir", "gamma", "lambda", "clip", "epochs", "minibatch_size",
      "horizon", "learning_rate", "c1", "c2", "entropy_coef", "max_grad_norm",
      "rho", "epsilon0", "normalize_observations", "shared_policy_trunk",
      "isolate_vex_head", "median_accepted_only", "returns_on_accepted_only",
      "adjusted_vex_predictors", "random_filter_prob",
      "random_filter_schedule_dir", "hidden_sizes", "parallel_seeds"};
  return k;
}

void ExperimentConfig::set(const std::string& key, const std::string& value) {
  if (key == "env") env = value;
  else if (key == "variant") variant = value;
  else if (key == "seeds")
    seeds = parse_list<std::uint64_t>(key, value, parse_long);
  else if (key == "total_steps") total_steps = parse_long(key, value);
  else if (key == "eval_every") eval_every = static_cast<int>(parse_long(key, value));
  else if (key == "eval_episodes") eval_episodes = static_cast<int>(parse_long(key, value));
  else if (key == "output_dir") output_dir = value;
  else if (key == "gamma") hyper.gamma = parse_real(key, value);
  else if (key == "lambda") hyper.lambda = parse_real(key, value);
  else if (key == "clip") hyper.clip = parse_real(key, value);
  else if (key == "epochs") hyper.epochs = static_cast<int>(parse_long(key, value));
  else if (key == "minibatch_size")
    hyper.minibatch_size = static_cast<int>(parse_long(key, value));
  else if (key == "horizon") hyper.horizon = static_cast<int>(parse_long(key, value));
  else if (key == "learning_rate") hyper.learning_rate = parse_real(key, value);
  else if (key == "c1") hyper.c1 = parse_real(key, value);
  else if (key == "c2") hyper.c2 = parse_real(key, value);
  else if (key == "entropy_coef") hyper.entropy_coef = parse_real(key, value);
  else if (key == "max_grad_norm") hyper.max_grad_norm = parse_real(key, value);
  else if (key == "rho") hyper.rho = parse_real(key, value);
  else if (key == "epsilon0") hyper.epsilon0 = parse_real(key, value);
  else if (key == "normalize_observations")
    normalize_observations = parse_bool(key, value);
  else if (key == "shared_policy_trunk") shared_policy_trunk = parse_bool(key, value);
  else if (key == "isolate_vex_head") isolate_vex_head = parse_bool(key, value);
  else if (key == "median_accepted_only") median_accepted_only = parse_bool(key, value);
  else if (key == "returns_on_accepted_only")
    returns_on_accepted_only = parse_bool(key, value);
  else if (key == "adjusted_vex_predictors")
    adjusted_vex_predictors = static_cast<int>(parse_long(key, value));
  else if (key == "random_filter_prob") random_filter_prob = parse_real(key, value);
  else if (key == "random_filter_schedule_dir") random_filter_schedule_dir = value;
  else if (key == "hidden_sizes")
    hidden_sizes = parse_list<int>(key, value, parse_long);
  else if (key == "parallel_seeds")
    parallel_seeds = static_cast<int>(parse_long(key, value));
  else {
    std::string known;
    for (const auto& k : keys()) known += (known.empty() ? "" : ", ") + k;
    throw std::invalid_argument("config: unknown key '" + key + "' (known: " + known +
                                ")");
  }
}

std::string ExperimentConfig::get(const std::string& key) const {
  if (key == "env") return env;
  if (key == "variant") return variant;
  if (key == "seeds") return join_list(seeds);
  if (key == "total_steps") return std::to_string(total_steps);
  if (key == "eval_every") return std::to_string(eval_every);
  if (key == "eval_episodes") return std::to_string(eval_episodes);
  if (key == "output_dir") return output_dir;
  if (key == "gamma") return csv::format_double(hyper.gamma);
  if (key == "lambda") return csv::format_double(hyper.lambda);
  if (key == "clip") return csv::format_double(hyper.clip);
  if (key == "epochs") return std::to_string(hyper.epochs);
  if (key == "minibatch_size") return std::to_string(hyper.minibatch_size);
  if (key == "horizon") return std::to_string(hyper.horizon);
  if (key == "learning_rate") return csv::format_double(hyper.learning_rate);
  if (key == "c1") return csv::format_double(hyper.c1);
  if (key == "c2") return csv::format_double(hyper.c2);
  if (key == "entropy_coef") return csv::format_double(hyper.entropy_coef);
  if (key == "max_grad_norm") return csv::format_double(hyper.max_grad_norm);
  if (key == "rho") return csv::format_double(hyper.rho);
  if (key == "epsilon0") return csv::format_double(hyper.epsilon0);
  if (key == "normalize_observations") return normalize_observations ? "true" : "false";
  if (key == "shared_policy_trunk") return shared_policy_trunk ? "true" : "false";
  if (key == "isolate_vex_head") return isolate_vex_head ? "true" : "false";
  if (key == "median_accepted_only") return median_accepted_only ? "true" : "false";
  if (key == "returns_on_accepted_only")
    return returns_on_accepted_only ? "true" : "false";
  if (key == "adjusted_vex_predictors") return std::to_string(adjusted_vex_predictors);
  if (key == "random_filter_prob") return csv::format_double(random_filter_prob);
  if (key == "random_filter_schedule_dir") return random_filter_schedule_dir;
  if (key == "hidden_sizes") return join_list(hidden_sizes);
  if (key == "parallel_seeds") return std::to_string(parallel_seeds);
  throw std::invalid_argument("config: unknown key '" + key + "'");
}

void ExperimentConfig::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open config file: " + path);
  }
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("config: line " + std::to_string(line_no) +
                                  " of " + path + " is not 'key = value'");
    }
    set(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
}

void ExperimentConfig::apply_override(const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos) {
    throw std::invalid_argument("--set expects key=value, got '" + assignment + "'");
  }
  set(trim(assignment.substr(0, eq)), trim(assignment.substr(eq + 1)));
}

std::string ExperimentConfig::to_text() const {
  std::string out;
  for (const auto& key : keys()) {
    out += key + " = " + get(key) + "\n";
  }
  return out;
}

void ExperimentConfig::validate() const {
  hyper.validate();
  make_env(env);                  // throws on unknown environment
  variant_from_string(variant);   // throws on unknown variant
  if (seeds.empty()) throw std::invalid_argument("config: seed list must be nonempty");
  if (total_steps < hyper.horizon) {
    throw std::invalid_argument("config: total_steps must be at least one horizon");
  }
  if (eval_every <= 0 || eval_episodes <= 0) {
    throw std::invalid_argument("config: eval_every and eval_episodes must be positive");
  }
  if (adjusted_vex_predictors < 1) {
    throw std::invalid_argument("config: adjusted_vex_predictors must be >= 1");
  }
  if (!(random_filter_prob >= 0.0 && random_filter_prob < 1.0)) {
    throw std::invalid_argument("config: random_filter_prob must be in [0, 1)");
  }
  for (int h : hidden_sizes) {
    if (h <= 0) throw std::invalid_argument("config: hidden sizes must be positive");
  }
}

AgentOptions ExperimentConfig::agent_options(std::uint64_t seed) const {
  AgentOptions o;
  o.env_name = env;
  o.variant = variant_from_string(variant);
  o.hyper = hyper;
  o.normalize_observations = normalize_observations;
  o.shared_policy_trunk = shared_policy_trunk;
  o.isolate_vex_head = isolate_vex_head;
  o.median_accepted_only = median_accepted_only;
  o.returns_on_accepted_only = returns_on_accepted_only;
  o.adjusted_vex_predictors = adjusted_vex_predictors;
  o.random_filter_prob = random_filter_prob;
  o.hidden_sizes = hidden_sizes;
  o.total_steps = total_steps;
  o.eval_every = eval_every;
  o.eval_episodes = eval_episodes;
  o.seed = seed;
  return o;
}

std::uint64_t seed_offset_from_env() {
  const char* value = std::getenv("SAUNA_SEED_OFFSET");
  if (value == nullptr || *value == '\0') return 0;
  try {
    return static_cast<std::uint64_t>(std::stoull(value));
  } catch (const std::exception&) {
    throw std::invalid_argument("SAUNA_SEED_OFFSET must be a non-negative integer");
  }
}

}  // namespace sauna
