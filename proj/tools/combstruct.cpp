#include <cstdio>
#include <cstdlib>
#include <map>
#include <sstream>
#include <iostream>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "combstruct/limits.hpp"
#include "combstruct/moments.hpp"
#include "combstruct/oracle.hpp"
#include "combstruct/sampler.hpp"
#include "combstruct/spec_io.hpp"
#include "combstruct/tv.hpp"
#include "combstruct/verify.hpp"

using namespace combstruct;
using nlohmann::json;

namespace {

constexpr const char* kVersion = "1.0.0";

struct FlagError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

using Cell = std::variant<std::int64_t, double, std::string>;

/// Everything a command prints. TSV: `#` header lines, then either
/// key/value lines (no table) or a column line plus rows, with scalars as
/// `#` lines. JSON: one object.
struct Report {
  std::string command;
  std::optional<StructureSpec> spec;
  std::vector<std::pair<std::string, Cell>> params;
  std::vector<std::pair<std::string, Cell>> summary;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

std::string format_cell(const Cell& c, int precision) {
  if (const auto* i = std::get_if<std::int64_t>(&c)) return std::to_string(*i);
  if (const auto* s = std::get_if<std::string>(&c)) return *s;
  const double v = std::get<double>(c);
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", precision, v);
  return buf;
}

json cell_json(const Cell& c) {
  if (const auto* i = std::get_if<std::int64_t>(&c)) return *i;
  if (const auto* s = std::get_if<std::string>(&c)) return *s;
  return std::get<double>(c);
}

void print_tsv(const Report& r, int precision, std::ostream& out) {
  out << "# combstruct " << kVersion << "\n# command\t" << r.command << "\n";
  if (r.spec) out << "# spec\t" << spec_to_json(*r.spec) << "\n# spec_hash\t" << spec_hash(*r.spec) << "\n";
  for (const auto& [k, v] : r.params) out << "# " << k << "\t" << format_cell(v, precision) << "\n";
  const bool table = !r.columns.empty();
  for (const auto& [k, v] : r.summary) {
    out << (table ? "# " : "") << k << "\t" << format_cell(v, precision) << "\n";
  }
  if (!table) return;
  for (std::size_t i = 0; i < r.columns.size(); ++i) out << (i ? "\t" : "") << r.columns[i];
  out << "\n";
  for (const auto& row : r.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "\t" : "") << format_cell(row[i], precision);
    out << "\n";
  }
}

void print_json(const Report& r, std::ostream& out) {
  json doc;
  doc["tool"] = "combstruct";
  doc["version"] = kVersion;
  doc["command"] = r.command;
  if (r.spec) {
    doc["spec"] = json::parse(spec_to_json(*r.spec));
    doc["spec_hash"] = spec_hash(*r.spec);
  }
  json params = json::object();
  for (const auto& [k, v] : r.params) params[k] = cell_json(v);
  doc["params"] = params;
  json summary = json::object();
  for (const auto& [k, v] : r.summary) summary[k] = cell_json(v);
  doc["summary"] = summary;
  if (!r.columns.empty()) {
    doc["columns"] = r.columns;
    json rows = json::array();
    for (const auto& row : r.rows) {
      json jr = json::array();
      for (const auto& c : row) jr.push_back(cell_json(c));
      rows.push_back(jr);
    }
    doc["rows"] = rows;
  }
  out << doc.dump(1) << "\n";
}

BigRational parse_rational(const std::string& text) {
  const auto slash = text.find('/');
  try {
    if (slash != std::string::npos) {
      BigRational q(BigInt(text.substr(0, slash)), BigInt(text.substr(slash + 1)));
      if (q.get_den() == 0) throw FlagError("zero denominator in '" + text + "'");
      q.canonicalize();
      return q;
    }
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size()) throw FlagError("cannot parse number '" + text + "'");
    return rational_from_double(v);
  } catch (const std::invalid_argument&) {
    throw FlagError("cannot parse number '" + text + "'");
  } catch (const std::out_of_range&) {
    throw FlagError("number out of range '" + text + "'");
  }
}

/// "1:2,3:1" -> {1: 2, 3: 1}
std::map<int, int> parse_pairs(const std::string& text) {
  std::map<int, int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto colon = item.find(':');
    if (colon == std::string::npos) throw FlagError("expected i:count in '" + item + "'");
    try {
      const int i = std::stoi(item.substr(0, colon));
      const int c = std::stoi(item.substr(colon + 1));
      if (i < 1 || c < 0) throw FlagError("bad pair '" + item + "'");
      out[i] += c;
    } catch (const std::logic_error&) {
      throw FlagError("bad pair '" + item + "'");
    }
  }
  return out;
}

int thread_count() {
  const char* env = std::getenv("CS_THREADS");
  if (!env || !*env) return 1;
  char* end = nullptr;
  const long v = std::strtol(env, &end, 10);
  if (*end || v < 1 || v > 1024) throw FlagError("CS_THREADS must be an integer in 1..1024");
  return static_cast<int>(v);
}

/// Flags shared by the subcommands; each subcommand registers the subset it uses.
struct Flags {
  std::string spec_path;
  int n = 0;
  std::string B;
  bool B_given = false;
  std::optional<double> x;
  std::string strategy;
  std::string theta = "1";
  std::uint64_t seed = 1;
  std::uint64_t stream = 0;
  std::size_t samples = 1000;
  std::string format = "tsv";
  int precision = 12;

  std::optional<StructureSpec> spec;
  BigRational theta_q = 1;
  double theta_d = 1.0;
};

void add_spec(CLI::App* cmd, Flags& f) { cmd->add_option("--spec", f.spec_path, "structure spec JSON file")->required(); }
void add_n(CLI::App* cmd, Flags& f) {
  cmd->add_option("--n", f.n, "weight n")->required()->check(CLI::Range(1, 100000000));
}
void add_B(CLI::App* cmd, Flags& f, bool required) {
  auto* o = cmd->add_option("--B", f.B, "index set, e.g. 1..5,7");
  if (required) o->required();
}
void add_tilt(CLI::App* cmd, Flags& f) {
  auto* ox = cmd->add_option("--x", f.x, "free parameter x");
  auto* os = cmd->add_option("--choose-x", f.strategy,
                             "exact-mean, logarithmic, logarithmic-tilted, set-partition, "
                             "integer-partition, distinct-partition, distinct-odd-partition");
  ox->excludes(os);
  cmd->add_option("--theta", f.theta, "component bias theta (decimal or p/q)");
}

Report base_report(const std::string& command, const Flags& f) {
  Report r;
  r.command = command;
  r.spec = f.spec;
  return r;
}

TiltedParams resolve_params(const Flags& f, int n, Report& r) {
  TiltedParams p;
  p.theta = f.theta_d;
  if (f.x) {
    p.x = *f.x;
  } else {
    const XStrategy s = f.strategy.empty() ? XStrategy::ExactMean : parse_strategy(f.strategy);
    p.x = choose_x(*f.spec, n, p.theta, s);
    r.params.emplace_back("choose_x", std::string(strategy_name(s)));
  }
  validate(*f.spec, p);
  r.params.emplace_back("n", std::int64_t{n});
  r.params.emplace_back("theta", f.theta);
  r.params.emplace_back("x", p.x);
  return p;
}

IndexSet resolve_B(const Flags& f, int n, Report& r) {
  IndexSet B = f.B_given ? IndexSet::parse(f.B) : IndexSet::range(1, n);
  r.params.emplace_back("B", B.to_string());
  return B;
}

Report cmd_tv(const Flags& f) {
  Report r = base_report("tv", f);
  const TiltedParams params = resolve_params(f, f.n, r);
  const IndexSet B = resolve_B(f, f.n, r);
  const TvReport tv = tv_CB_ZB(*f.spec, B, f.n, params);
  r.summary = {{"exact", tv.exact},       {"lower", tv.lower},   {"tail_term", tv.tail_term},
               {"body_sum", tv.body_sum}, {"prob_T", tv.prob_T}};
  if (f.spec->meta() && !B.empty()) {
    r.summary.emplace_back("heuristic",
                           tv_heuristic(*f.spec, B, f.n, params, limit_law_for(*f.spec, f.n, params)));
  }
  if (f.n <= 10) {
    const ExactLaw law = exact_joint_law(*f.spec, f.n, f.theta_q);
    const double oracle = tv_against(restrict_law(law, B), product_pmf(*f.spec, B, params));
    r.summary.emplace_back("oracle", oracle);
    r.summary.emplace_back("oracle_gap", std::fabs(oracle - tv.exact));
  }
  return r;
}

Report cmd_prob_t(const Flags& f) {
  Report r = base_report("prob-t", f);
  const TiltedParams params = resolve_params(f, f.n, r);
  const ProbTReport p = prob_T_report(*f.spec, f.n, params);
  r.summary = {{"recursion", p.recursion}, {"closed_form", p.closed_form}, {"relative_gap", p.relative_gap}};
  if (f.spec->kind() == Kind::Selection) {
    const auto check = check_signed_recursion(*f.spec, IndexSet::range(1, f.n), f.n, params);
    if (check.flagged) throw NumericGuard("signed recursion lost precision (gap " + std::to_string(check.max_gap) + ")");
    r.summary.emplace_back("signed_recursion_gap", check.max_gap);
  }
  return r;
}

std::string rational_string(const BigRational& q) {
  return q.get_den() == 1 ? q.get_num().get_str() : q.get_str();
}

Report cmd_pofn(const Flags& f, bool float_only) {
  Report r = base_report("pofn", f);
  r.params = {{"n", std::int64_t{f.n}}, {"theta", f.theta}};
  const auto logs = log_p_total_table(*f.spec, f.n, f.theta_d);
  std::vector<BigRational> exact;
  if (!float_only) exact = p_total_exact_table(*f.spec, f.n, f.theta_q);
  r.columns = float_only ? std::vector<std::string>{"k", "log_p", "p"}
                         : std::vector<std::string>{"k", "exact", "log_p", "p"};
  for (int k = 0; k <= f.n; ++k) {
    const double lp = float_only ? logs[static_cast<std::size_t>(k)] : log_of(exact[static_cast<std::size_t>(k)]);
    std::vector<Cell> row{std::int64_t{k}};
    if (!float_only) row.emplace_back(rational_string(exact[static_cast<std::size_t>(k)]));
    row.emplace_back(lp);
    row.emplace_back(std::exp(lp));
    r.rows.push_back(std::move(row));
  }
  return r;
}

Report cmd_moments(const Flags& f, int max_order, const std::string& joint) {
  Report r = base_report("moments", f);
  const TiltedParams params = resolve_params(f, f.n, r);
  if (!joint.empty()) {
    if (f.spec->kind() != Kind::Assembly) throw FlagError("--joint needs an assembly");
    const MomentSpec m{parse_pairs(joint)};
    r.params.emplace_back("joint", joint);
    r.summary.emplace_back("moment", factorial_moment_assembly(*f.spec, f.n, m, params));
    return r;
  }
  const IndexSet B = resolve_B(f, f.n, r);
  r.params.emplace_back("max_order", std::int64_t{max_order});
  r.columns = {"j", "r", "factorial_moment"};
  for (int j : B) {
    if (j > f.n) continue;
    for (int order = 1; order <= max_order; ++order) {
      r.rows.push_back({std::int64_t{j}, std::int64_t{order},
                        factorial_moment_single(*f.spec, f.n, j, order, params)});
    }
  }
  return r;
}

void cmd_sample(const Flags& f, bool stats_only, std::ostream& out) {
  Report r = base_report("sample", f);
  const TiltedParams params = resolve_params(f, f.n, r);
  r.params.emplace_back("seed", static_cast<std::int64_t>(f.seed));
  r.params.emplace_back("stream", static_cast<std::int64_t>(f.stream));
  r.params.emplace_back("samples", static_cast<std::int64_t>(f.samples));
  const SampleBatch batch =
      sample_components(*f.spec, f.n, params, f.samples, {f.seed, f.stream}, thread_count());
  const auto stats = statistics(batch.samples);
  r.summary = {{"trials", static_cast<std::int64_t>(batch.trials)},
               {"accepted", static_cast<std::int64_t>(batch.accepted)},
               {"prob_T", batch.prob_T},
               {"acceptance_rate", static_cast<double>(batch.accepted) / static_cast<double>(batch.trials)}};
  if (f.format == "json") {
    json doc;
    std::stringstream tmp;
    print_json(r, tmp);
    doc = json::parse(tmp.str());
    json js = json::object();
    for (const auto& s : stats) js[s.name] = {{"mean", s.mean}, {"variance", s.variance}, {"std_error", s.std_error}};
    doc["statistics"] = js;
    if (!stats_only) {
      json samples = json::array();
      for (const auto& a : batch.samples) {
        json sparse = json::object();
        for (int i = 1; i <= a.n; ++i) {
          if (a.at(i) > 0) sparse[std::to_string(i)] = a.at(i);
        }
        samples.push_back(sparse);
      }
      doc["samples"] = samples;
    }
    out << doc.dump(1) << "\n";
    return;
  }
  r.columns = {"statistic", "mean", "variance", "std_error"};
  for (const auto& s : stats) r.rows.push_back({s.name, s.mean, s.variance, s.std_error});
  std::stringstream tmp;
  print_tsv(r, f.precision, tmp);
  // statistics become `#` lines so the body is one sample per line
  std::string line;
  bool in_table = false;
  while (std::getline(tmp, line)) {
    if (!in_table && line.rfind("statistic\t", 0) == 0) in_table = true;
    out << (in_table ? "# " : "") << line << "\n";
  }
  if (stats_only) return;
  for (const auto& a : batch.samples) {
    bool first = true;
    for (int i = 1; i <= a.n; ++i) {
      if (a.at(i) == 0) continue;
      out << (first ? "" : "\t") << i << ":" << a.at(i);
      first = false;
    }
    out << "\n";
  }
}

Report cmd_choose_x(const Flags& f) {
  Report r = base_report("choose-x", f);
  const TiltedParams params = resolve_params(f, f.n, r);
  const SumMoments m = sum_moments(*f.spec, f.n, params);
  r.summary = {{"x", params.x}, {"mean_T", m.mean}, {"residual", std::fabs(m.mean - f.n)},
               {"variance_T", m.variance}};
  return r;
}

Report cmd_limit(const Flags& f, int points) {
  Report r = base_report("limit", f);
  const TiltedParams params = resolve_params(f, f.n, r);
  std::vector<double> grid;
  for (int k = 1; k <= points; ++k) grid.push_back(static_cast<double>(k) / points);
  const LimitCheck check = limit_law_check(*f.spec, f.n, params, grid);
  r.summary = {{"kappa", check.law.kappa},     {"c", check.law.c},
               {"n_prob_T", check.n_prob},     {"g_c(1)", check.predicted},
               {"relative_gap", check.relative_gap}};
  r.columns = {"z", "density", "limit_cdf", "exact_cdf"};
  for (const auto& row : check.rows) {
    r.rows.push_back({row.z, limit_density(check.law, row.z), row.limit_cdf, row.exact_cdf});
  }
  return r;
}

Report cmd_esf(int n, double kappa, int max_order, const std::string& vector) {
  if (!(kappa > 0)) throw DomainError("kappa must be positive");
  Report r;
  r.command = "esf";
  r.params = {{"n", std::int64_t{n}}, {"kappa", kappa}};
  r.summary.emplace_back("log_p_n", std::lgamma(n + kappa) - std::lgamma(kappa));
  if (!vector.empty()) {
    ComponentVector a = ComponentVector::zeros(n);
    for (const auto& [i, c] : parse_pairs(vector)) {
      if (i > n) throw FlagError("component size above n in --a");
      a.at(i) = c;
    }
    if (!a.complete()) throw DomainError("--a must satisfy sum i a_i = n");
    r.params.emplace_back("a", vector);
    r.summary.emplace_back("pmf", esf_pmf(n, kappa, a));
  }
  r.columns = {"j", "r", "factorial_moment"};
  for (int j = 1; j <= n; ++j) {
    for (int order = 1; order <= max_order; ++order) {
      r.rows.push_back({std::int64_t{j}, std::int64_t{order}, esf_moment(n, kappa, MomentSpec::single(j, order))});
    }
  }
  return r;
}

Report cmd_heuristic(const Flags& f, int doublings) {
  Report r = base_report("heuristic", f);
  if (!f.spec->meta()) throw DomainError("heuristic needs a logarithmic class (spec meta)");
  r.params = {{"n", std::int64_t{f.n}}, {"theta", f.theta}, {"doublings", std::int64_t{doublings}}};
  const IndexSet B = f.B_given ? IndexSet::parse(f.B) : IndexSet::range(1, 1);
  r.params.emplace_back("B", B.to_string());
  r.columns = {"n", "x", "exact", "heuristic", "n_exact", "n_heuristic", "ratio"};
  int n = f.n;
  for (int step = 0; step <= doublings; ++step, n *= 2) {
    Report scratch;
    const TiltedParams params = resolve_params(f, n, scratch);
    const double exact = tv_CB_ZB(*f.spec, B, n, params).exact;
    const double h = tv_heuristic(*f.spec, B, n, params, limit_law_for(*f.spec, n, params));
    r.rows.push_back({std::int64_t{n}, params.x, exact, h, n * exact, n * h, exact / h});
  }
  return r;
}

int cmd_verify(int n_max, const std::string& format, int precision, std::ostream& out) {
  Report r;
  r.command = "verify";
  r.params = {{"n_max", std::int64_t{n_max}}};
  r.columns = {"check", "status", "measured", "tolerance", "detail"};
  bool ok = true;
  for (const auto& c : run_verify(n_max)) {
    ok = ok && c.passed;
    r.rows.push_back({c.name, std::string(c.passed ? "PASS" : "FAIL"), c.measured, c.tolerance, c.detail});
  }
  r.summary.emplace_back("result", std::string(ok ? "PASS" : "FAIL"));
  if (format == "json") {
    print_json(r, out);
  } else {
    print_tsv(r, precision, out);
  }
  return ok ? 0 : 1;
}

bool given(const CLI::App* cmd, const std::string& name) {
  const CLI::Option* o = cmd->get_option_no_throw(name);
  return o && o->count() > 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Random decomposable combinatorial structures as conditioned independent processes"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  Flags f;
  int max_order = 3;
  int points = 10;
  int doublings = 0;
  int n_max = 10;
  double kappa = 1.0;
  bool float_only = false;
  bool stats_only = false;
  std::string joint;
  std::string vector;

  auto common = [&](CLI::App* cmd) {
    cmd->add_option("--format", f.format, "tsv or json")->check(CLI::IsMember({"tsv", "json"}));
    cmd->add_option("--precision", f.precision, "significant digits in TSV")->check(CLI::Range(1, 17));
  };

  auto* tv = app.add_subcommand("tv", "exact d_TV(C_B(n), Z_B)");
  add_spec(tv, f), add_n(tv, f), add_B(tv, f, true), add_tilt(tv, f), common(tv);

  auto* pt = app.add_subcommand("prob-t", "P_theta(T_n = n) by recursion and closed form");
  add_spec(pt, f), add_n(pt, f), add_tilt(pt, f), common(pt);

  auto* pofn = app.add_subcommand("pofn", "p_theta(k) for k = 0..n");
  add_spec(pofn, f), add_n(pofn, f), common(pofn);
  pofn->add_option("--theta", f.theta, "component bias theta (decimal or p/q)");
  pofn->add_flag("--float-only", float_only, "skip the exact column");

  auto* mom = app.add_subcommand("moments", "falling-factorial moments of C_j(n)");
  add_spec(mom, f), add_n(mom, f), add_B(mom, f, false), add_tilt(mom, f), common(mom);
  mom->add_option("--order", max_order, "largest order r")->check(CLI::Range(1, 64));
  mom->add_option("--joint", joint, "joint orders j:r,... (assemblies)");

  auto* smp = app.add_subcommand("sample", "exact samples of C(n)");
  add_spec(smp, f), add_n(smp, f), add_tilt(smp, f), common(smp);
  smp->add_option("--seed", f.seed, "rng seed");
  smp->add_option("--stream", f.stream, "rng stream");
  smp->add_option("--samples", f.samples, "number of samples")->check(CLI::Range(std::size_t{1}, std::size_t{100000000}));
  smp->add_flag("--stats-only", stats_only, "print statistics only");

  auto* cx = app.add_subcommand("choose-x", "free parameter x and |E T_n - n|");
  add_spec(cx, f), add_n(cx, f), add_tilt(cx, f), common(cx);

  auto* lim = app.add_subcommand("limit", "limit density of T_n / n and n P(T_n = n)");
  add_spec(lim, f), add_n(lim, f), add_tilt(lim, f), common(lim);
  lim->add_option("--points", points, "grid points in (0, 1]")->check(CLI::Range(1, 100000));

  auto* esf = app.add_subcommand("esf", "Ewens sampling formula moments and pmf");
  add_n(esf, f), common(esf);
  esf->add_option("--kappa", kappa, "ESF parameter")->required();
  esf->add_option("--order", max_order, "largest order r")->check(CLI::Range(1, 64));
  esf->add_option("--a", vector, "component vector i:a_i,... for the pmf");

  auto* heu = app.add_subcommand("heuristic", "first-order d_TV estimate against the exact value");
  add_spec(heu, f), add_n(heu, f), add_B(heu, f, false), add_tilt(heu, f), common(heu);
  heu->add_option("--doublings", doublings, "repeat with n doubled this many times")->check(CLI::Range(0, 20));

  auto* ver = app.add_subcommand("verify", "oracle cross-checks at small n");
  common(ver);
  ver->add_option("--n-max", n_max, "largest n")->check(CLI::Range(1, 12));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  std::ostringstream out;
  try {
    CLI::App* cmd = app.get_subcommands().front();
    f.B_given = given(cmd, "--B") > 0;
    if (given(cmd, "--theta")) {
      f.theta_q = parse_rational(f.theta);
      f.theta_d = f.theta_q.get_d();
      if (!(f.theta_q > 0)) throw DomainError("theta must be positive");
    }
    try {
      if (given(cmd, "--choose-x")) parse_strategy(f.strategy);
      if (f.B_given) IndexSet::parse(f.B);
    } catch (const DomainError& e) {
      throw FlagError(e.what());
    }
    if (given(cmd, "--spec")) f.spec = load_spec(f.spec_path);

    const std::string name = cmd->get_name();
    int code = 0;
    if (name == "sample") {
      thread_count();
      cmd_sample(f, stats_only, out);
    } else if (name == "verify") {
      code = cmd_verify(n_max, f.format, f.precision, out);
    } else {
      Report r;
      if (name == "tv") r = cmd_tv(f);
      else if (name == "prob-t") r = cmd_prob_t(f);
      else if (name == "pofn") r = cmd_pofn(f, float_only);
      else if (name == "moments") r = cmd_moments(f, max_order, joint);
      else if (name == "choose-x") r = cmd_choose_x(f);
      else if (name == "limit") r = cmd_limit(f, points);
      else if (name == "esf") r = cmd_esf(f.n, kappa, max_order, vector);
      else if (name == "heuristic") r = cmd_heuristic(f, doublings);
      if (f.format == "json") {
        print_json(r, out);
      } else {
        print_tsv(r, f.precision, out);
      }
    }
    std::cout << out.str();
    return code;
  } catch (const FlagError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const DomainError& e) {
    std::cerr << "domain error: " << e.what() << "\n";
    return 3;
  } catch (const NumericGuard& e) {
    std::cerr << "numeric guard: " << e.what() << "\n";
    return 4;
  }
}
