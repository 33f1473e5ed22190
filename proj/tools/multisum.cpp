#include <algorithm>
#include <cstdint>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "demos.hpp"
#include "multisum/forms.hpp"
#include "multisum/io.hpp"
#include "multisum/norms.hpp"
#include "multisum/parallel.hpp"
#include "multisum/rademacher.hpp"
#include "multisum/random.hpp"
#include "multisum/summing.hpp"
#include "multisum/verify.hpp"

using namespace multisum;

namespace {

enum Exit { kOk = 0, kError = 1, kFailed = 2, kBadInput = 3 };

struct RunConfig {
  std::uint64_t seed = 7;
  std::uint64_t budget = 1000;
  double tol = 1e-6;
  double kg_real = ConstantsConfig{}.kg_real;
  double kg_complex = ConstantsConfig{}.kg_complex;
  std::string out;
  std::string format = "json";
  unsigned threads = 1;
  bool allow_real_experimental = false;

  VerifyOptions verify_options(unsigned inner_threads) const {
    VerifyOptions o;
    o.constants.kg_real = kg_real;
    o.constants.kg_complex = kg_complex;
    o.constants.tolerance = tol;
    o.constants.validate();
    o.opnorm.ascent.threads = inner_threads;
    o.allow_real_experimental = allow_real_experimental;
    o.threads = inner_threads;
    return o;
  }
};

// Settings for batches of generated instances.
struct BatchConfig {
  std::size_t count = 0;
  std::size_t m = 4;
  std::size_t n = 2;
  std::size_t length = 4;
  std::string field;
  std::string domain = "inf";
};

void emit(const RunConfig& cfg, const std::string& text) {
  if (cfg.out.empty()) {
    std::cout << text;
  } else {
    write_text_file(cfg.out, text);
  }
}

Exponent parse_exponent(const std::string& s) {
  try {
    return Exponent::parse(s);
  } catch (const std::exception& e) {
    throw std::invalid_argument("bad exponent '" + s + "': " + e.what());
  }
}

std::vector<Exponent> parse_exponent_list(const std::string& s) {
  std::vector<Exponent> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_exponent(item));
  if (out.empty()) throw std::invalid_argument("empty exponent list");
  return out;
}

std::size_t uniform(Rng& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

FormTensor random_form(Rng& rng, const std::vector<std::size_t>& dims, Field field, Exponent s) {
  std::vector<SpaceSpec> domains;
  std::size_t count = 1;
  for (auto d : dims) {
    domains.emplace_back(d, s);
    count *= d;
  }
  return FormTensor(domains, field, gaussian_vector(rng, count, field));
}

std::vector<std::size_t> random_dims(Rng& rng, std::size_t n, std::size_t m) {
  std::vector<std::size_t> dims(n);
  for (auto& d : dims) d = uniform(rng, 1, m);
  return dims;
}

TestFamily random_family(Rng& rng, const FormTensor& a, std::size_t slots, std::size_t length) {
  TestFamily fam;
  for (std::size_t i = 0; i < slots; ++i) {
    const auto& d = a.domains()[i];
    std::vector<std::vector<Scalar>> v;
    for (std::size_t j = 0; j < length; ++j) v.push_back(gaussian_vector(rng, d.dim, a.field()));
    fam.columns.emplace_back(d, a.field(), v);
  }
  return fam;
}

Json summary_json(const std::string& check, const std::vector<VerificationReport>& reports,
                  const RunConfig& cfg) {
  std::size_t counts[4] = {0, 0, 0, 0};
  double max_ratio = 0.0;
  bool exact = true;
  for (const auto& r : reports) {
    ++counts[static_cast<int>(r.status)];
    max_ratio = std::max(max_ratio, r.ratio);
    exact = exact && r.exact_norm;
  }
  return Json{{"check", check},
              {"count", reports.size()},
              {"pass", counts[static_cast<int>(Status::pass)]},
              {"fail", counts[static_cast<int>(Status::fail)]},
              {"inconclusive", counts[static_cast<int>(Status::inconclusive)]},
              {"reported", counts[static_cast<int>(Status::reported)]},
              {"max_ratio", max_ratio},
              {"all_exact", exact},
              {"seed", cfg.seed}};
}

int finish_reports(const std::string& check, const std::vector<VerificationReport>& reports,
                   const RunConfig& cfg) {
  const Json summary = summary_json(check, reports, cfg);
  if (cfg.format == "csv") {
    emit(cfg, reports_to_csv(reports));
  } else {
    Json body = Json::array();
    for (const auto& r : reports) body.push_back(report_to_json(r));
    emit(cfg, Json{{"reports", body}, {"summary", summary}}.dump(2) + "\n");
  }
  std::cerr << check << ": " << summary["count"] << " checks, " << summary["pass"] << " pass, "
            << summary["fail"] << " fail, " << summary["inconclusive"] << " inconclusive, "
            << summary["reported"] << " reported; max ratio " << summary["max_ratio"].dump() << "\n";
  return summary["fail"].get<std::size_t>() > 0 ? kFailed : kOk;
}

// Runs make(i) for every instance on the worker pool; slot i holds report i.
template <class Make>
std::vector<VerificationReport> run_batch(std::size_t count, unsigned threads, Make&& make) {
  std::vector<VerificationReport> reports(count);
  for_each_chunk(count, threads, [&](std::size_t i) {
    reports[i] = make(i);
    reports[i].witness["instance"] = i;
  });
  return reports;
}

// ---- norm ----

struct NormArgs {
  std::string kind;
  std::string file;
  std::string p = "2";
  std::string q = "2";
  std::string mode = "exact";
};

int cmd_norm(const NormArgs& args, const RunConfig& cfg) {
  const Json doc = read_json_file(args.file);
  struct Row {
    double value;
    bool exact;
  };
  std::vector<Row> rows;
  Json extra = Json::object();

  if (args.kind == "opnorm") {
    const FormTensor a = form_from_json(doc);
    OpNormOptions o;
    o.ascent.threads = cfg.threads;
    const auto r = op_norm(a, o);
    rows.push_back({r.value, r.exact});
  } else if (args.kind == "mixed") {
    const Matrix m = matrix_from_json(doc);
    rows.push_back({mixed_norm(m, parse_exponent(args.p), parse_exponent(args.q)), true});
  } else {
    const VectorSeq seq = seq_from_json(doc);
    const Exponent p = parse_exponent(args.p);
    if (args.kind == "lp") {
      for (const auto& v : seq.vectors) rows.push_back({lp_norm(v, p), true});
    } else if (args.kind == "weak") {
      const auto r = weak_lp_norm(seq, p);
      rows.push_back({r.value, r.exact});
    } else {
      RadMode mode = RadExact{};
      if (args.mode == "mc") {
        mode = RadMonteCarlo{cfg.budget, cfg.seed};
      } else if (args.mode != "exact") {
        throw std::invalid_argument("--mode must be exact or mc");
      }
      const auto r = rad_p_norm(seq, p, mode, cfg.threads);
      rows.push_back({r.value, r.exact});
      if (!r.exact) extra["std_error"] = r.std_error;
    }
  }

  if (cfg.format == "csv") {
    std::string text = "kind,index,value,exact\n";
    char buf[64];
    for (std::size_t i = 0; i < rows.size(); ++i) {
      std::snprintf(buf, sizeof buf, "%.17g", rows[i].value);
      text += args.kind + "," + std::to_string(i) + "," + buf + "," + (rows[i].exact ? "true" : "false") + "\n";
    }
    emit(cfg, text);
  } else {
    Json j{{"kind", args.kind}};
    if (args.kind == "lp") {
      Json values = Json::array();
      for (const auto& r : rows) values.push_back(r.value);
      j["values"] = values;
      j["exact"] = true;
    } else {
      j["value"] = rows[0].value;
      j["exact"] = rows[0].exact;
    }
    for (const auto& [k, v] : extra.items()) j[k] = v;
    emit(cfg, j.dump(2) + "\n");
  }
  return kOk;
}

// ---- verify ----

struct VerifyArgs {
  std::string suite;
  std::vector<std::string> inputs;
  BatchConfig batch;
  std::string p = "4/3";
  std::string beta = "identity";
  std::size_t curry = 0;
  std::string from;
  std::string to;
};

Field field_or(const std::string& s, Field fallback) { return s.empty() ? fallback : parse_field(s); }

Matrix make_beta(const std::string& spec, std::size_t m, Field field, Rng& rng) {
  if (spec == "identity") return Matrix::identity(m, field);
  if (spec == "random") {
    std::vector<std::vector<Scalar>> rows;
    for (std::size_t j = 0; j < m; ++j) rows.push_back(gaussian_vector(rng, m, field));
    return Matrix::from_rows(rows, field);
  }
  return matrix_from_json(read_json_file(spec));
}

ExponentTuple parse_tuple(const std::string& s, const char* flag) {
  if (s.empty()) throw std::invalid_argument(std::string(flag) + " is required");
  try {
    return ExponentTuple::parse(s);
  } catch (const std::exception& e) {
    throw std::invalid_argument(std::string("bad ") + flag + " '" + s + "': " + e.what());
  }
}

VerificationReport verify_one(const VerifyArgs& args, const FormTensor& a, const TestFamily* fam,
                              const Matrix* beta, Exponent p, const VerifyOptions& o) {
  const std::string& s = args.suite;
  if (s == "littlewood") return verify_littlewood_43(a, o);
  if (s == "general") return verify_general_littlewood(a, o);
  if (s == "bh") return verify_bh(a, o);
  if (s == "extended") return verify_extended_littlewood(a, *beta, p, o);
  if (s == "dv") return verify_defant_voigt(a, *fam, o);
  if (s == "almost") {
    if (args.curry > 0) return verify_almost_summing(curry(a, args.curry), *fam, o);
    return verify_almost_summing(a, *fam, o);
  }
  return verify_inclusion(a, *fam, parse_tuple(args.from, "--from"), parse_tuple(args.to, "--to"));
}

bool needs_family(const std::string& suite) {
  return suite == "dv" || suite == "almost" || suite == "inclusion";
}

int cmd_verify(const VerifyArgs& args, const RunConfig& cfg) {
  const std::vector<Exponent> ps = parse_exponent_list(args.p);
  if (args.suite == "inclusion") {
    parse_tuple(args.from, "--from");
    parse_tuple(args.to, "--to");
  }

  if (args.batch.count == 0) {
    if (args.inputs.empty()) throw std::invalid_argument("verify needs a form file or --random N");
    const FormTensor a = form_from_json(read_json_file(args.inputs[0]));
    std::optional<TestFamily> fam;
    if (needs_family(args.suite)) {
      if (args.inputs.size() < 2) throw std::invalid_argument(args.suite + " needs a family file");
      fam = family_from_json(read_json_file(args.inputs[1]));
    }
    std::optional<Matrix> beta;
    if (args.suite == "extended") {
      Rng rng = make_rng(cfg.seed, 0);
      beta = make_beta(args.beta, a.dims()[0], a.field(), rng);
    }
    const VerifyOptions o = cfg.verify_options(cfg.threads);
    std::vector<VerificationReport> reports;
    for (const auto& p : ps) {
      reports.push_back(verify_one(args, a, fam ? &*fam : nullptr, beta ? &*beta : nullptr, p, o));
      if (args.suite != "extended") break;
    }
    return finish_reports(args.suite, reports, cfg);
  }

  if (!args.inputs.empty()) throw std::invalid_argument("--random does not take input files");
  const BatchConfig& b = args.batch;
  if (b.m == 0 || b.length == 0) throw std::invalid_argument("--m and --length must be positive");
  const bool extended = args.suite == "extended";
  const Field field = field_or(b.field, extended ? Field::complex : Field::real);
  const Exponent domain = parse_exponent(b.domain);
  const std::size_t order = extended || args.suite == "littlewood" || args.suite == "general" ||
                                    args.suite == "inclusion"
                                ? 2
                                : b.n;
  if (args.curry >= order && args.curry > 0) throw std::invalid_argument("--curry must be below the order");
  std::optional<Matrix> file_beta;
  if (extended && args.beta != "identity" && args.beta != "random") {
    file_beta = matrix_from_json(read_json_file(args.beta));
  }
  const VerifyOptions o = cfg.verify_options(1);

  auto reports = run_batch(b.count, cfg.threads, [&](std::size_t i) {
    Rng rng = make_rng(cfg.seed, i);
    if (extended) {
      // Square instances: a and beta are both m x m.
      const std::size_t m = file_beta ? file_beta->cols() : uniform(rng, 1, b.m);
      const FormTensor a = random_form(rng, {m, m}, field, domain);
      const Matrix beta = file_beta ? *file_beta : make_beta(args.beta, m, field, rng);
      return verify_one(args, a, nullptr, &beta, ps[i % ps.size()], o);
    }
    const FormTensor a = random_form(rng, random_dims(rng, order, b.m), field, domain);
    if (!needs_family(args.suite)) return verify_one(args, a, nullptr, nullptr, ps[0], o);
    const std::size_t slots = args.suite == "almost" && args.curry > 0 ? args.curry : order;
    const TestFamily fam = random_family(rng, a, slots, uniform(rng, 1, b.length));
    return verify_one(args, a, &fam, nullptr, ps[0], o);
  });
  return finish_reports(args.suite, reports, cfg);
}

// ---- search ----

int cmd_search(const std::string& file, const std::string& exps, std::size_t max_length,
               const RunConfig& cfg) {
  const FormTensor a = form_from_json(read_json_file(file));
  SearchOptions s;
  s.budget = cfg.budget;
  s.seed = cfg.seed;
  s.max_length = max_length;
  s.threads = cfg.threads;
  const auto best = random_family_search(a, parse_tuple(exps, "--exps"), s);
  Json j = certificate_to_json(best);
  j["budget"] = cfg.budget;
  j["seed"] = cfg.seed;
  emit(cfg, j.dump(2) + "\n");
  std::cerr << "search " << exps << ": best ratio " << Json(best.ratio).dump()
            << (best.certified() ? " (certified)" : " (heuristic weak norms)") << "\n";
  return kOk;
}

// ---- experiment ----

struct ExperimentArgs {
  std::string name;
  BatchConfig batch;
  std::string p = "3/2";
  std::string q = "2";
};

int cmd_experiment(const ExperimentArgs& args, const RunConfig& cfg) {
  const BatchConfig& b = args.batch;
  if (b.m == 0) throw std::invalid_argument("--m must be positive");
  const Field field = field_or(b.field, Field::real);
  const VerifyOptions o = cfg.verify_options(1);
  std::vector<VerificationReport> reports;
  if (args.name == "bh") {
    if (b.n < 2) throw std::invalid_argument("--n must be at least 2");
    const Exponent domain = parse_exponent(b.domain);
    reports = run_batch(b.count, cfg.threads, [&](std::size_t i) {
      Rng rng = make_rng(cfg.seed, i);
      return verify_bh(random_form(rng, random_dims(rng, b.n, b.m), field, domain), o);
    });
  } else {
    const Exponent p = parse_exponent(args.p);
    const Exponent q = parse_exponent(args.q);
    reports = run_batch(b.count, cfg.threads, [&](std::size_t i) {
      Rng rng = make_rng(cfg.seed, i);
      const auto dims = random_dims(rng, 2, b.m);
      std::vector<SpaceSpec> domains{SpaceSpec(dims[0], p), SpaceSpec(dims[1], q)};
      const FormTensor a(domains, field, gaussian_vector(rng, dims[0] * dims[1], field));
      SearchOptions s;
      s.budget = cfg.budget;
      s.seed = derive_seed(cfg.seed, i);
      s.max_length = b.length;
      return p21_experiment(a, s, o);
    });
  }
  return finish_reports(args.name, reports, cfg);
}

void add_batch_options(CLI::App* sub, BatchConfig& b, std::size_t default_count) {
  b.count = default_count;
  sub->add_option("--random", b.count, "Number of seeded random instances");
  sub->add_option("--m", b.m, "Largest dimension per domain")->capture_default_str();
  sub->add_option("--n", b.n, "Order of generated forms")->capture_default_str();
  sub->add_option("--length", b.length, "Largest family length")->capture_default_str();
  sub->add_option("--field", b.field, "real or complex")->check(CLI::IsMember({"real", "complex"}));
  sub->add_option("--domain", b.domain, "Domain exponent of generated forms")->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Summability checks for multilinear forms"};
  app.require_subcommand(1);
  RunConfig cfg;
  app.add_option("--seed", cfg.seed, "Master seed")->capture_default_str();
  app.add_option("--budget", cfg.budget, "Random trials for search and Monte Carlo")->capture_default_str();
  app.add_option("--tol", cfg.tol, "Relative slack for heuristic norms")->capture_default_str();
  app.add_option("--kg-real", cfg.kg_real, "Real Grothendieck constant")->capture_default_str();
  app.add_option("--kg-complex", cfg.kg_complex, "Complex Grothendieck constant")->capture_default_str();
  app.add_option("--out", cfg.out, "Write output here instead of stdout");
  app.add_option("--format", cfg.format, "json or csv")->check(CLI::IsMember({"json", "csv"}))->capture_default_str();
  app.add_option("--threads", cfg.threads, "Worker threads; 0 uses all cores")->capture_default_str();
  app.add_flag("--allow-real-experimental", cfg.allow_real_experimental,
               "Report the extended check on real forms");

  NormArgs norm;
  auto* norm_cmd = app.add_subcommand("norm", "Evaluate one norm");
  norm_cmd->add_option("kind", norm.kind, "lp, mixed, weak, rad or opnorm")
      ->required()
      ->check(CLI::IsMember({"lp", "mixed", "weak", "rad", "opnorm"}));
  norm_cmd->add_option("file", norm.file, "Input JSON")->required();
  norm_cmd->add_option("--p", norm.p)->capture_default_str();
  norm_cmd->add_option("--q", norm.q)->capture_default_str();
  norm_cmd->add_option("--mode", norm.mode, "exact or mc")->capture_default_str();

  std::string opnorm_file;
  auto* opnorm_cmd = app.add_subcommand("opnorm", "Operator norm of a form");
  opnorm_cmd->add_option("file", opnorm_file, "Form JSON")->required();

  VerifyArgs verify;
  auto* verify_cmd = app.add_subcommand("verify", "Run a verifier suite");
  verify_cmd->add_option("suite", verify.suite)
      ->required()
      ->check(CLI::IsMember({"littlewood", "extended", "general", "bh", "dv", "almost", "inclusion"}));
  verify_cmd->add_option("inputs", verify.inputs, "Form file, then family file where needed");
  add_batch_options(verify_cmd, verify.batch, 0);
  verify_cmd->add_option("--p", verify.p, "Outer exponent(s) for extended, comma separated")
      ->capture_default_str();
  verify_cmd->add_option("--beta", verify.beta, "identity, random, or a matrix file")->capture_default_str();
  verify_cmd->add_option("--curry", verify.curry, "Head order for curried almost summing");
  verify_cmd->add_option("--from", verify.from, "Source exponents, e.g. 2;2,2");
  verify_cmd->add_option("--to", verify.to, "Target exponents, e.g. 1;1,1");

  std::string search_file;
  std::string search_exps;
  std::size_t search_length = 16;
  auto* search_cmd = app.add_subcommand("search", "Best summing ratio over random families");
  search_cmd->add_option("file", search_file, "Form JSON")->required();
  search_cmd->add_option("--exps", search_exps, "Exponents, e.g. 1;2,2")->required();
  search_cmd->add_option("--length", search_length, "Largest family length")->capture_default_str();

  ExperimentArgs experiment;
  auto* experiment_cmd = app.add_subcommand("experiment", "Empirical ratios without asserted bounds");
  experiment_cmd->add_option("name", experiment.name, "p21 or bh")
      ->required()
      ->check(CLI::IsMember({"p21", "bh"}));
  experiment.batch.m = 3;
  experiment.batch.n = 3;
  experiment.batch.length = 8;
  add_batch_options(experiment_cmd, experiment.batch, 20);
  experiment_cmd->add_option("--p", experiment.p, "First domain exponent for p21")->capture_default_str();
  experiment_cmd->add_option("--q", experiment.q, "Second domain exponent for p21")->capture_default_str();

  auto* demos_cmd = app.add_subcommand("demos", "Rerun the worked examples as a smoke suite");

  for (auto* sub : app.get_subcommands({})) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kBadInput;
  }

  try {
    if (*norm_cmd) return cmd_norm(norm, cfg);
    if (*opnorm_cmd) return cmd_norm(NormArgs{"opnorm", opnorm_file}, cfg);
    if (*verify_cmd) return cmd_verify(verify, cfg);
    if (*search_cmd) return cmd_search(search_file, search_exps, search_length, cfg);
    if (*experiment_cmd) return cmd_experiment(experiment, cfg);
    if (*demos_cmd) return run_demos(std::cout) ? kOk : kFailed;
  } catch (const SchemaError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kBadInput;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kBadInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kError;
  }
  return kError;
}
