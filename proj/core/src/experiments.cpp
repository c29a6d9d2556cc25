#include "acquire/experiments.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <condition_variable>
#include <mutex>
#include <ostream>
#include <thread>

#include "acquire/instance_io.hpp"
#include "acquire/tessellation.hpp"
#include "acquire/upper_bound.hpp"

namespace acquire {

std::string to_string(Regime r) {
  switch (r) {
    case Regime::Sparse: return "sparse";
    case Regime::Mid: return "mid";
    case Regime::Dense: return "dense";
  }
  return "unknown";
}

Regime regime_of(double n, double r) {
  if (r < 1.0) return Regime::Sparse;
  if (r * std::log2(r) > std::sqrt(n)) return Regime::Dense;
  return Regime::Mid;
}

bool SweepConfig::runs(std::string_view method) const {
  return std::find(methods.begin(), methods.end(), method) != methods.end();
}

namespace {

constexpr std::string_view kMethods[] = {"dangerous", "ball", "tessellation", "fallback",
                                         "greedy"};

template <typename T>
T scalar(const YAML::Node& root, const char* key, T fallback) {
  const YAML::Node node = root[key];
  if (!node) return fallback;
  try {
    return node.as<T>();
  } catch (const YAML::Exception& e) {
    throw ConfigError(std::string("config key '") + key + "': " + e.what());
  }
}

template <typename T>
std::vector<T> sequence(const YAML::Node& root, const char* key) {
  const YAML::Node node = root[key];
  if (!node) return {};
  try {
    if (node.IsScalar()) return {node.as<T>()};
    return node.as<std::vector<T>>();
  } catch (const YAML::Exception& e) {
    throw ConfigError(std::string("config key '") + key + "': " + e.what());
  }
}

}  // namespace

SweepConfig parse_config(std::string_view yaml) {
  YAML::Node root;
  try {
    root = YAML::Load(std::string(yaml));
  } catch (const YAML::Exception& e) {
    throw ConfigError(std::string("config is not valid YAML: ") + e.what());
  }
  if (!root.IsMap()) throw ConfigError("config must be a mapping");
  SweepConfig c;
  c.version = scalar<int>(root, "version", 1);
  if (c.version != 1) throw ConfigError("config key 'version': only version 1 is supported");
  c.n = sequence<double>(root, "n");
  c.r = sequence<double>(root, "r");
  c.seeds = scalar<std::size_t>(root, "seeds", c.seeds);
  c.seed_base = scalar<std::uint64_t>(root, "seed_base", c.seed_base);
  if (root["methods"]) c.methods = sequence<std::string>(root, "methods");
  for (const auto& m : c.methods) {
    if (std::find(std::begin(kMethods), std::end(kMethods), m) == std::end(kMethods)) {
      throw ConfigError("config key 'methods': unknown method '" + m + "'");
    }
  }
  c.c = scalar<double>(root, "c", c.c);
  c.eps = scalar<double>(root, "eps", c.eps);
  c.aux_spacing_r = scalar<double>(root, "aux_spacing_r", c.aux_spacing_r);
  if (!(c.aux_spacing_r >= 0.0)) throw ConfigError("config key 'aux_spacing_r': must be >= 0");
  c.strict_level_check = scalar<bool>(root, "strict_level_check", c.strict_level_check);
  c.ball_budget = scalar<Weight>(root, "ball_budget", c.ball_budget);
  const auto mode = scalar<std::string>(root, "ball_mode", to_string(c.ball_mode));
  if (auto parsed = ball_mode_from_string(mode)) {
    c.ball_mode = *parsed;
  } else {
    throw ConfigError("config key 'ball_mode': expected exact or cellbound");
  }
  c.workers = scalar<unsigned>(root, "workers", c.workers);
  c.poisson = scalar<bool>(root, "poisson", c.poisson);
  c.check_caps = scalar<bool>(root, "check_caps", c.check_caps);
  c.protocol_dir = scalar<std::string>(root, "protocol_dir", c.protocol_dir);
  for (double n : c.n) {
    if (!(n >= 1.0)) throw ConfigError("config key 'n': values must be at least 1");
  }
  for (double r : c.r) {
    if (!(r > 0.0)) throw ConfigError("config key 'r': values must be positive");
  }
  return c;
}

SweepConfig load_config(const std::filesystem::path& path) {
  return parse_config(read_file(path));
}

std::optional<std::size_t> TrialRecord::best_lower() const {
  std::optional<std::size_t> best;
  for (const auto& v : {lower_dangerous, lower_ball}) {
    if (v && (!best || *v > *best)) best = v;
  }
  return best;
}

std::optional<std::size_t> TrialRecord::best_upper() const {
  std::optional<std::size_t> best;
  for (const auto& v : {upper_tessellation, upper_fallback_only, upper_greedy}) {
    if (v && (!best || *v < *best)) best = v;
  }
  return best;
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

// Dense instances keep only the cell grid: materialising r = 32 at n = 10^6
// would need billions of edges.
AdjacencyMode adjacency_for(double n, double r) {
  const double expected_degree = 3.141592653589793 * r * r;
  return n * expected_degree <= 4e7 ? AdjacencyMode::Materialized : AdjacencyMode::GridOnly;
}

void check_replay(const GeometricGraph& g, const Protocol& p, std::size_t reported,
                  const char* method, bool caps) {
  const WeightState state = replay(g, p, caps);
  if (state.positive_count() != reported) {
    throw std::runtime_error(std::string(method) + ": replay residual " +
                             std::to_string(state.positive_count()) + " != reported " +
                             std::to_string(reported));
  }
  if (caps) {
    const CapReport report = check_weight_caps(state);
    if (!report.ok()) {
      throw std::runtime_error(std::string(method) + ": " +
                               std::to_string(report.violations.size()) +
                               " weight-cap violations");
    }
  }
}

std::string protocol_file_name(double n, double r, std::uint64_t seed, const char* method) {
  return "n" + format_double(n) + "_r" + format_double(r) + "_s" + std::to_string(seed) + "_" +
         method + ".atp";
}

}  // namespace

TrialRecord run_trial(const SweepConfig& config, double n, double r, std::uint64_t seed) {
  TrialRecord t;
  t.n = n;
  t.r = r;
  t.seed = seed;
  t.regime = regime_of(n, r);
  try {
    auto start = Clock::now();
    const AdjacencyMode mode = adjacency_for(n, r);
    const GeometricGraph g = config.poisson
                                 ? sample_poisson(n, r, seed, mode)
                                 : sample_fixed_n(static_cast<std::size_t>(std::llround(n)), r,
                                                  seed, mode);
    t.vertices = g.vertex_count();
    t.build_seconds = seconds_since(start);

    start = Clock::now();
    if (config.runs("dangerous")) {
      const auto cert = dangerous_squares(g);
      t.lower_dangerous = cert.value;
      t.dangerous_conditional = cert.conditional;
    }
    if (config.runs("ball")) {
      t.lower_ball = ball_counting_cap(g, config.ball_budget, config.ball_mode).value;
    }
    t.certify_seconds = seconds_since(start);

    std::vector<std::pair<const char*, std::pair<Protocol, std::size_t>>> emitted;
    start = Clock::now();
    if (config.runs("tessellation") || config.runs("fallback")) {
      std::optional<TessellationPlan> p;
      try {
        p = classify(plan(g.side() * g.side(), r, config.c, config.eps), g);
      } catch (const PlanError&) {
        // Plan preconditions fail (r < 2 or the plane is too small): no value.
      }
      if (p && config.runs("tessellation")) {
        UpperOptions opts;
        opts.embed.aux_spacing = config.aux_spacing_r * r;
        opts.embed.strict_level_check = config.strict_level_check;
        UpperResult res = full_protocol(g, *p, opts);
        t.upper_tessellation = res.residual_count;
        t.good_square_fraction =
            static_cast<double>(res.good_squares) / static_cast<double>(p->square_count());
        t.error1 = res.error1;
        t.error2 = res.error2;
        t.error3 = res.error3;
        t.demoted = res.demoted_squares;
        emitted.push_back({"tessellation", {std::move(res.protocol), res.residual_count}});
      }
      if (p && config.runs("fallback")) {
        UpperOptions opts;
        opts.force_fallback = true;
        UpperResult res = full_protocol(g, *p, opts);
        t.upper_fallback_only = res.residual_count;
        emitted.push_back({"fallback", {std::move(res.protocol), res.residual_count}});
      }
    }
    if (config.runs("greedy")) {
      Protocol p = greedy_upper(g);
      const std::size_t residual = g.vertex_count() - p.moves.size();
      t.upper_greedy = residual;
      emitted.push_back({"greedy", {std::move(p), residual}});
    }
    t.protocol_seconds = seconds_since(start);

    start = Clock::now();
    for (const auto& [method, entry] : emitted) {
      check_replay(g, entry.first, entry.second, method, config.check_caps);
    }
    if (!config.protocol_dir.empty()) {
      const std::filesystem::path dir(config.protocol_dir);
      std::filesystem::create_directories(dir);
      for (const auto& [method, entry] : emitted) {
        write_file(dir / protocol_file_name(n, r, seed, method),
                   save_protocol(entry.first, g.vertex_count()));
      }
    }
    t.replay_seconds = seconds_since(start);

    const auto lo = t.best_lower(), hi = t.best_upper();
    t.sandwich_ok = !(lo && hi) || *lo <= *hi;
  } catch (const std::exception& e) {
    t.error = e.what();
    t.sandwich_ok = false;
  }
  return t;
}

namespace {

template <typename T>
std::string opt(const std::optional<T>& v) {
  if (!v) return "";
  if constexpr (std::is_floating_point_v<T>) {
    return format_double(*v);
  } else {
    return std::to_string(*v);
  }
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch == '\n' ? ' ' : ch;
  }
  return out + "\"";
}

}  // namespace

std::string csv_header() {
  return "schema,n,r,seed,regime,vertices,lower_dangerous,lower_dangerous_conditional,"
         "lower_ball,upper_tessellation,upper_fallback_only,upper_greedy,good_square_fraction,"
         "error1,error2,error3,demoted,sandwich_ok,error\n";
}

std::string csv_row(const TrialRecord& t) {
  std::string row;
  row += std::string(kCsvSchema) + ',';
  row += format_double(t.n) + ',';
  row += format_double(t.r) + ',';
  row += std::to_string(t.seed) + ',';
  row += to_string(t.regime) + ',';
  row += std::to_string(t.vertices) + ',';
  row += opt(t.lower_dangerous) + ',';
  row += std::string(t.dangerous_conditional ? "1" : "0") + ',';
  row += opt(t.lower_ball) + ',';
  row += opt(t.upper_tessellation) + ',';
  row += opt(t.upper_fallback_only) + ',';
  row += opt(t.upper_greedy) + ',';
  row += opt(t.good_square_fraction) + ',';
  row += std::to_string(t.error1) + ',';
  row += std::to_string(t.error2) + ',';
  row += std::to_string(t.error3) + ',';
  row += std::to_string(t.demoted) + ',';
  row += std::string(t.sandwich_ok ? "1" : "0") + ',';
  row += csv_escape(t.error) + '\n';
  return row;
}

std::string timing_header() { return "n,r,seed,build_s,certify_s,protocol_s,replay_s\n"; }

std::string timing_row(const TrialRecord& t) {
  return format_double(t.n) + ',' + format_double(t.r) + ',' + std::to_string(t.seed) + ',' +
         format_double(t.build_seconds) + ',' + format_double(t.certify_seconds) + ',' +
         format_double(t.protocol_seconds) + ',' + format_double(t.replay_seconds) + '\n';
}

std::vector<TrialRecord> run_sweep(const SweepConfig& config, std::ostream& csv,
                                   std::ostream* timing) {
  struct Task {
    double n, r;
    std::uint64_t seed;
  };
  std::vector<Task> tasks;
  for (double n : config.n) {
    for (double r : config.r) {
      for (std::size_t s = 0; s < config.seeds; ++s) tasks.push_back({n, r, config.seed_base + s});
    }
  }
  csv << csv_header();
  if (timing) *timing << timing_header();
  csv.flush();

  std::vector<std::optional<TrialRecord>> results(tasks.size());
  std::mutex mutex;
  std::condition_variable ready;
  std::size_t next = 0;
  auto worker = [&] {
    for (;;) {
      std::size_t i;
      {
        std::lock_guard lock(mutex);
        if (next >= tasks.size()) return;
        i = next++;
      }
      TrialRecord rec = run_trial(config, tasks[i].n, tasks[i].r, tasks[i].seed);
      {
        std::lock_guard lock(mutex);
        results[i] = std::move(rec);
      }
      ready.notify_all();
    }
  };
  const unsigned workers =
      std::max(1u, std::min<unsigned>(config.workers, static_cast<unsigned>(tasks.size())));
  std::vector<std::jthread> pool;
  for (unsigned w = 0; w < workers && !tasks.empty(); ++w) pool.emplace_back(worker);

  std::vector<TrialRecord> out;
  out.reserve(tasks.size());
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    std::unique_lock lock(mutex);
    ready.wait(lock, [&] { return results[i].has_value(); });
    out.push_back(std::move(*results[i]));
    results[i].reset();
    lock.unlock();
    csv << csv_row(out.back());
    csv.flush();
    if (timing) {
      *timing << timing_row(out.back());
      timing->flush();
    }
  }
  return out;
}

namespace {

std::vector<std::string> split_csv(std::string_view line) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char ch = line[i];
    if (quoted) {
      if (ch == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (ch == '"') {
        quoted = false;
      } else {
        cur += ch;
      }
    } else if (ch == '"') {
      quoted = true;
    } else if (ch == ',') {
      fields.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += ch;
    }
  }
  fields.push_back(std::move(cur));
  return fields;
}

template <typename T>
T parse_field(const std::string& s, std::size_t line, const char* name) {
  T v{};
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) {
    throw ParseError(line, name, "cannot parse '" + s + "'");
  }
  return v;
}

template <typename T>
std::optional<T> parse_opt(const std::string& s, std::size_t line, const char* name) {
  if (s.empty()) return std::nullopt;
  return parse_field<T>(s, line, name);
}

}  // namespace

std::vector<TrialRecord> parse_csv(std::string_view text) {
  std::vector<TrialRecord> out;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const auto nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? text.npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() : nl + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    if (line_no == 1) {
      if (line.substr(0, 7) != "schema,") throw ParseError(1, "header", "missing CSV header");
      continue;
    }
    const auto f = split_csv(line);
    if (f.size() != 19) throw ParseError(line_no, "row", "expected 19 fields");
    if (f[0] != kCsvSchema) throw ParseError(line_no, "schema", "unsupported schema " + f[0]);
    TrialRecord t;
    t.n = parse_field<double>(f[1], line_no, "n");
    t.r = parse_field<double>(f[2], line_no, "r");
    t.seed = parse_field<std::uint64_t>(f[3], line_no, "seed");
    if (f[4] == "sparse") {
      t.regime = Regime::Sparse;
    } else if (f[4] == "mid") {
      t.regime = Regime::Mid;
    } else if (f[4] == "dense") {
      t.regime = Regime::Dense;
    } else {
      throw ParseError(line_no, "regime", "unknown regime " + f[4]);
    }
    t.vertices = parse_field<std::size_t>(f[5], line_no, "vertices");
    t.lower_dangerous = parse_opt<std::size_t>(f[6], line_no, "lower_dangerous");
    t.dangerous_conditional = f[7] == "1";
    t.lower_ball = parse_opt<std::size_t>(f[8], line_no, "lower_ball");
    t.upper_tessellation = parse_opt<std::size_t>(f[9], line_no, "upper_tessellation");
    t.upper_fallback_only = parse_opt<std::size_t>(f[10], line_no, "upper_fallback_only");
    t.upper_greedy = parse_opt<std::size_t>(f[11], line_no, "upper_greedy");
    t.good_square_fraction = parse_opt<double>(f[12], line_no, "good_square_fraction");
    t.error1 = parse_field<std::size_t>(f[13], line_no, "error1");
    t.error2 = parse_field<std::size_t>(f[14], line_no, "error2");
    t.error3 = parse_field<std::size_t>(f[15], line_no, "error3");
    t.demoted = parse_field<std::size_t>(f[16], line_no, "demoted");
    t.sandwich_ok = f[17] == "1";
    t.error = f[18];
    out.push_back(std::move(t));
  }
  return out;
}

}  // namespace acquire
