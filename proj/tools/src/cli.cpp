#include "bayescp_cli/cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string_view>

#include <CLI11.hpp>
#include <unistd.h>

#include <bayescp/bayescp.hpp>

namespace bayescp::cli {

using Json = nlohmann::ordered_json;

namespace {

struct Options {
  std::vector<std::string> data;
  std::vector<std::string> train;
  std::optional<std::string> theta;
  std::optional<std::size_t> k_max;
  std::optional<std::size_t> min_len;
  std::optional<std::size_t> max_len;
  std::string model = "iid";
  std::size_t samples = 100;
  std::uint64_t seed = 1;
  std::string out;
  std::string format = "json";
  bool center = false;
  bool concat = false;
  std::size_t iterations = 10;

  std::string scenario = "hierarchical";
  std::size_t n = 100;
  std::optional<std::size_t> k;
  double jump = 1.0;
  double noise_sd = 1.0;
  std::size_t gap_length = 100;
  std::vector<std::string> gaps;
  std::string truth;
};

Json theta_json(const Hyperparams& th) {
  return Json{{"mu0", th.mu0}, {"k0", th.k0}, {"nu0", th.nu0}, {"sigma0_sq", th.sigma0_sq}};
}

Hyperparams parse_explicit_theta(const std::string& text, ModelVariant variant) {
  std::vector<double> v;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      v.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ConfigError("--theta expects mu0,k0,nu0,sigma0sq, auto or mcem; got '" + text + "'");
    }
  }
  if (v.size() != 4) throw ConfigError("--theta expects four comma-separated numbers");
  Hyperparams th{v[0], v[1], v[2], v[3], variant};
  th.validate();
  return th;
}

ObservedSequence load_file(const std::string& path) {
  try {
    return read_csv(path);
  } catch (const IngestError& e) {
    if (e.line() == 0) throw;
    throw IngestError(path + ":" + std::to_string(e.line()) + ": " + e.what(), e.line());
  }
}

ObservedSequence centred(const ObservedSequence& seq) {
  std::vector<Track> tracks = seq.tracks();
  for (auto& t : tracks) {
    double sum = 0.0;
    std::size_t m = 0;
    for (double y : t)
      if (!is_missing(y)) sum += y, ++m;
    if (m == 0) continue;
    for (double& y : t)
      if (!is_missing(y)) y -= sum / static_cast<double>(m);
  }
  return ObservedSequence(std::move(tracks));
}

ModelVariant variant_of(const Options& o) {
  const ModelVariant v = parse_model_variant(o.model);
  if (o.center && v != ModelVariant::kAr1) throw ConfigError("--center applies to --model ar1 only");
  return v;
}

ObservedSequence load_data(const Options& o) {
  if (o.data.empty()) throw ConfigError("--data is required");
  if (o.data.size() > 1 && !o.concat) throw ConfigError("several --data files need --concat");
  std::vector<ObservedSequence> parts;
  for (const auto& path : o.data) parts.push_back(load_file(path));
  ObservedSequence seq = parts.size() == 1 ? parts.front() : concatenate(parts);
  return o.center ? centred(seq) : seq;
}

std::vector<ObservedSequence> load_training(const Options& o) {
  std::vector<ObservedSequence> out;
  for (const auto& path : o.train) {
    auto seq = load_file(path);
    out.push_back(o.center ? centred(seq) : seq);
  }
  return out;
}

// Every observed value of every track, as one track, for a pooled default.
Hyperparams pooled_default(const std::vector<ObservedSequence>& seqs, ModelVariant variant) {
  Track pooled;
  for (const auto& s : seqs)
    for (std::size_t r = 0; r < s.num_tracks(); ++r)
      for (double y : s.track(r))
        if (!is_missing(y)) pooled.push_back(y);
  return default_hyperparams(pooled, variant);
}

std::optional<LengthBounds> bounds_of(const Options& o, std::size_t n) {
  if (!o.min_len && !o.max_len) return std::nullopt;
  return LengthBounds{o.min_len.value_or(1), o.max_len.value_or(n)};
}

std::size_t k_max_of(const Options& o, std::size_t n) {
  const std::size_t k = o.k_max.value_or(20);
  if (k == 0) throw ConfigError("--kmax must be at least 1");
  return std::min(k, n);
}

McemConfig mcem_config(const Options& o) {
  McemConfig cfg;
  cfg.iterations = o.iterations;
  cfg.samples_per_sequence = o.samples;
  cfg.k_max = o.k_max.value_or(20);
  if (o.min_len || o.max_len) cfg.bounds = LengthBounds{o.min_len.value_or(1), o.max_len.value_or(0)};
  cfg.seed = o.seed;
  cfg.validate();
  return cfg;
}

Json mcem_json(const McemResult& fit) {
  Json trace = Json::array();
  for (std::size_t i = 0; i < fit.log_evidence_trace.size(); ++i) {
    trace.push_back({{"iteration", i},
                     {"log_evidence", log_value(fit.log_evidence_trace[i])},
                     {"objective_stderr", i == 0 ? Json() : Json(fit.objective_stderr[i - 1])}});
  }
  return Json{{"status", to_string(fit.status)}, {"iterations_run", fit.iterations_run}, {"trace", trace}};
}

struct ResolvedTheta {
  std::string source;
  std::vector<Hyperparams> per_track;
  Json mcem;  // null unless fitted
};

ResolvedTheta resolve_theta(const Options& o, const ObservedSequence& seq, ModelVariant variant) {
  const std::string text = o.theta.value_or("auto");
  ResolvedTheta out;
  if (text == "mcem") {
    if (o.train.empty()) throw ConfigError("--theta mcem needs at least one --train file");
    const auto train = load_training(o);
    const auto fit = mcem_fit(train, pooled_default(train, variant), mcem_config(o));
    out.source = "mcem";
    out.per_track.assign(seq.num_tracks(), fit.theta);
    out.mcem = mcem_json(fit);
    return out;
  }
  if (!o.train.empty()) throw ConfigError("--train is only used with --theta mcem");
  if (text == "auto") {
    out.source = "auto";
    for (std::size_t r = 0; r < seq.num_tracks(); ++r)
      out.per_track.push_back(default_hyperparams(seq.track(r), variant));
    return out;
  }
  out.source = "explicit";
  out.per_track.assign(seq.num_tracks(), parse_explicit_theta(text, variant));
  return out;
}

struct Model {
  ObservedSequence seq;
  ResolvedTheta theta;
  ForwardTable table;
};

Model build_model(const Options& o) {
  const ModelVariant variant = variant_of(o);
  ObservedSequence seq = load_data(o);
  ResolvedTheta theta = resolve_theta(o, seq, variant);
  const std::size_t n = seq.size();
  SegPrior prior = build_seg_prior(n, k_max_of(o, n), bounds_of(o, n));
  ForwardTable table = forward(EvidenceKernel(seq, theta.per_track), std::move(prior));
  return {std::move(seq), std::move(theta), std::move(table)};
}

Json header(const char* command, const Options& o, const Model& m) {
  Json thetas = Json::array();
  for (const auto& th : m.theta.per_track) thetas.push_back(theta_json(th));
  Json doc{{"command", command},
           {"model", o.model},
           {"n", m.seq.size()},
           {"tracks", m.seq.num_tracks()},
           {"k_max", m.table.k_max()},
           {"min_length", m.table.prior().min_length()},
           {"max_length", m.table.prior().max_length()},
           {"theta_source", m.theta.source},
           {"theta", thetas}};
  if (!m.theta.mcem.is_null()) doc["mcem"] = m.theta.mcem;
  return doc;
}

Json number_array(const std::vector<double>& v) {
  Json a = Json::array();
  for (double x : v) a.push_back(x);
  return a;
}

std::string csv_number(double v) {
  if (std::isnan(v)) return "";
  if (std::isinf(v)) return v < 0 ? "-inf" : "inf";
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

std::string cmd_segment(const Options& o) {
  if (o.samples == 0) throw ConfigError("--samples must be at least 1");
  const Model m = build_model(o);
  const std::size_t n = m.seq.size();
  const auto log_pk = log_posterior_num_segments(m.table);
  const auto map = map_segmentation(m.table);
  const auto samples = sample_segmentations(m.table, o.samples, o.seed);
  const auto marginals = changepoint_marginals(samples, n);

  std::vector<PositionSummary> summaries;
  if (variant_of(o) == ModelVariant::kIidNormal)
    for (std::size_t r = 0; r < m.seq.num_tracks(); ++r)
      summaries.push_back(posterior_position_summary(samples, m.table.kernel(), r));

  if (o.format == "csv") {
    std::ostringstream os;
    os << "position,changepoint_marginal,map_changepoint";
    if (!summaries.empty()) os << ",mean_mu,mean_sigma_sq";
    os << '\n';
    std::vector<bool> on_map(n + 1, false);
    for (std::size_t c : map.segmentation.changepoints) on_map[c] = true;
    for (std::size_t p = 1; p <= n; ++p) {
      os << p << ',' << csv_number(p < n ? marginals[p - 1] : 1.0) << ',' << (on_map[p] ? 1 : 0);
      if (!summaries.empty()) {
        const auto& s = summaries.front();
        os << ',' << csv_number(s.mean_mu[p - 1]) << ','
           << (s.mean_sigma_sq[p - 1] ? csv_number(*s.mean_sigma_sq[p - 1]) : "");
      }
      os << '\n';
    }
    return os.str();
  }

  Json doc = header("segment", o, m);
  doc["log_evidence"] = log_value(log_marginal_evidence(m.table));
  Json lpk = Json::array(), pk = Json::array();
  for (double v : log_pk) {
    lpk.push_back(log_value(v));
    pk.push_back(v == kLogZero ? 0.0 : std::exp(v));
  }
  doc["log_posterior_k"] = lpk;
  doc["posterior_k"] = pk;
  doc["map"] = Json{{"changepoints", map.segmentation.changepoints},
                    {"num_segments", map.segmentation.num_segments()},
                    {"log_posterior", log_value(map.log_posterior)}};
  Json draws = Json::array();
  for (const auto& a : samples.samples) draws.push_back(a.changepoints);
  doc["samples"] = Json{{"count", o.samples}, {"seed", o.seed}, {"segmentations", draws}};
  doc["changepoint_marginals"] = number_array(marginals);
  if (summaries.empty()) {
    doc["position_summary"] = nullptr;
  } else {
    Json per_track = Json::array();
    for (const auto& s : summaries) {
      Json sig = Json::array();
      for (const auto& v : s.mean_sigma_sq) sig.push_back(v ? Json(*v) : Json());
      per_track.push_back({{"mean_mu", number_array(s.mean_mu)}, {"mean_sigma_sq", sig}});
    }
    doc["position_summary"] = per_track;
  }
  return doc.dump(2) + "\n";
}

std::string cmd_marginals(const Options& o) {
  const Model m = build_model(o);
  const std::size_t n = m.seq.size();
  const auto exact = exact_changepoint_marginals(m.table);
  std::vector<double> sampled;
  if (o.samples > 0) sampled = changepoint_marginals(sample_segmentations(m.table, o.samples, o.seed), n);

  if (o.format == "csv") {
    std::ostringstream os;
    os << "position,exact" << (sampled.empty() ? "" : ",sampled") << '\n';
    for (std::size_t p = 1; p < n; ++p) {
      os << p << ',' << csv_number(exact[p - 1]);
      if (!sampled.empty()) os << ',' << csv_number(sampled[p - 1]);
      os << '\n';
    }
    return os.str();
  }
  Json doc = header("marginals", o, m);
  doc["log_evidence"] = log_value(log_marginal_evidence(m.table));
  doc["exact"] = number_array(exact);
  if (sampled.empty()) {
    doc["sampled"] = nullptr;
  } else {
    doc["sampled"] = number_array(sampled);
    doc["samples"] = Json{{"count", o.samples}, {"seed", o.seed}};
  }
  return doc.dump(2) + "\n";
}

std::string cmd_mcem(const Options& o) {
  const ModelVariant variant = variant_of(o);
  if (o.train.empty()) throw ConfigError("mcem needs at least one --train file");
  if (!o.data.empty()) throw ConfigError("mcem reads --train, not --data");
  const std::string text = o.theta.value_or("auto");
  if (text == "mcem") throw ConfigError("--theta for mcem is the starting value: auto or explicit");
  const auto train = load_training(o);
  const Hyperparams init = text == "auto" ? pooled_default(train, variant) : parse_explicit_theta(text, variant);
  const auto fit = mcem_fit(train, init, mcem_config(o));

  if (o.format == "csv") {
    std::ostringstream os;
    os << "iteration,log_evidence,objective_stderr\n";
    for (std::size_t i = 0; i < fit.log_evidence_trace.size(); ++i)
      os << i << ',' << csv_number(fit.log_evidence_trace[i]) << ','
         << (i == 0 ? "" : csv_number(fit.objective_stderr[i - 1])) << '\n';
    return os.str();
  }
  Json doc{{"command", "mcem"},
           {"model", o.model},
           {"sequences", train.size()},
           {"samples_per_sequence", o.samples},
           {"seed", o.seed},
           {"initial_theta", theta_json(init)},
           {"theta", theta_json(fit.theta)}};
  const Json fit_doc = mcem_json(fit);
  for (const auto& [key, value] : fit_doc.items()) doc[key] = value;
  return doc.dump(2) + "\n";
}

Gap parse_gap(const std::string& text) {
  const auto dash = text.find('-');
  try {
    if (dash == std::string::npos) {
      const auto p = std::stoul(text);
      return {p, p};
    }
    return {std::stoul(text.substr(0, dash)), std::stoul(text.substr(dash + 1))};
  } catch (const std::exception&) {
    throw ConfigError("--gap expects FIRST-LAST positions, got '" + text + "'");
  }
}

std::string cmd_simulate(const Options& o, std::string& sidecar) {
  SimSpec spec;
  if (o.scenario == "hierarchical") {
    spec.scenario = Scenario::kHierarchical;
    if (!o.theta || *o.theta == "auto" || *o.theta == "mcem")
      throw ConfigError("the hierarchical scenario needs --theta mu0,k0,nu0,sigma0sq");
    spec.theta = parse_explicit_theta(*o.theta, ModelVariant::kIidNormal);
  } else if (o.scenario == "single") {
    spec.scenario = Scenario::kSingleChangepoint;
  } else if (o.scenario == "gap") {
    spec.scenario = Scenario::kGapStudy;
  } else {
    throw ConfigError("unknown scenario '" + o.scenario + "' (expected hierarchical, single or gap)");
  }
  spec.n = o.n;
  spec.k = o.k;
  spec.k_max = o.k_max.value_or(1);
  spec.jump_mean = o.jump;
  spec.noise_sd = o.noise_sd;
  spec.gap_length = o.gap_length;
  for (const auto& g : o.gaps) spec.gaps.push_back(parse_gap(g));
  spec.seed = o.seed;
  const SimResult sim = simulate(spec);

  Json segments = Json::array();
  for (std::size_t t = 0; t < sim.truth.num_segments(); ++t) {
    const auto [begin, end] = sim.truth.segment(t);
    segments.push_back({{"first", begin + 1},
                        {"last", end},
                        {"mean", sim.segment_params[t].mean},
                        {"variance", sim.segment_params[t].variance}});
  }
  Json truth{{"command", "simulate"},
             {"scenario", o.scenario},
             {"seed", o.seed},
             {"n", sim.data.size()},
             {"changepoints", sim.truth.changepoints},
             {"segments", segments}};

  if (o.format == "json") {
    Json values = Json::array();
    for (double y : sim.data.track(0)) values.push_back(is_missing(y) ? Json() : Json(y));
    truth["values"] = values;
    return truth.dump(2) + "\n";
  }
  sidecar = truth.dump(2) + "\n";
  std::ostringstream os;
  os.precision(17);
  write_csv(os, sim.data);
  return os.str();
}

void add_common(CLI::App* cmd, Options& o) {
  cmd->add_option("--kmax", o.k_max, "Largest number of segments (default 20, capped at n)");
  cmd->add_option("--min-len", o.min_len, "Shortest admissible segment, in positions");
  cmd->add_option("--max-len", o.max_len, "Longest admissible segment, in positions");
  cmd->add_option("--model", o.model, "Segment model: iid or ar1")->check(CLI::IsMember({"iid", "ar1"}));
  cmd->add_option("--samples", o.samples, "Posterior samples (per training sequence for mcem)");
  cmd->add_option("--seed", o.seed, "Random seed");
  cmd->add_option("--out", o.out, "Output path; stdout when omitted");
  cmd->add_option("--format", o.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  cmd->add_flag("--center", o.center, "Subtract each track's mean before fitting (ar1 only)");
}

void add_inference(CLI::App* cmd, Options& o) {
  add_common(cmd, o);
  cmd->add_option("--data", o.data, "CSV file(s); columns are replica tracks");
  cmd->add_option("--train", o.train, "Training CSV files for --theta mcem");
  cmd->add_option("--theta", o.theta, "mu0,k0,nu0,sigma0sq | auto | mcem (default auto)");
  cmd->add_option("--iterations", o.iterations, "MCEM iterations for --theta mcem");
  cmd->add_flag("--concat", o.concat, "Concatenate several --data files into one sequence");
}

}  // namespace

Json log_value(double v) {
  if (v == kLogZero) return "-inf";
  return v;
}

void write_atomically(const std::filesystem::path& path, const std::string& contents) {
  auto tmp = path;
  tmp += ".tmp" + std::to_string(::getpid());
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw ConfigError("cannot write '" + tmp.string() + "'");
    f << contents;
    f.flush();
    if (!f) throw ConfigError("failed writing '" + tmp.string() + "'");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw ConfigError("cannot move output into place at '" + path.string() + "'");
  }
}

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const IngestError*>(&e) || dynamic_cast<const InsufficientData*>(&e) ||
      dynamic_cast<const DegenerateVariance*>(&e))
    return kExitIngest;
  if (dynamic_cast<const ConfigError*>(&e) || dynamic_cast<const DomainError*>(&e)) return kExitConfig;
  return kExitNumerical;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Bayesian multiple changepoint segmentation", "bayescp-cli"};
  app.require_subcommand(1);
  Options o;

  auto* segment = app.add_subcommand("segment", "Posterior summary of one sequence");
  add_inference(segment, o);
  auto* marginals = app.add_subcommand("marginals", "Exact and sampled changepoint probabilities");
  add_inference(marginals, o);
  auto* mcem = app.add_subcommand("mcem", "Fit hyperparameters by Monte Carlo EM");
  add_common(mcem, o);
  mcem->add_option("--train", o.train, "Training CSV files")->required();
  mcem->add_option("--theta", o.theta, "Starting value: mu0,k0,nu0,sigma0sq | auto");
  mcem->add_option("--iterations", o.iterations, "EM iterations");
  mcem->add_option("--data", o.data, "Not used; rejected");
  auto* sim = app.add_subcommand("simulate", "Generate a sequence and its true segmentation");
  sim->add_option("--scenario", o.scenario, "hierarchical | single | gap");
  sim->add_option("--n", o.n, "Sequence length (hierarchical, single)");
  sim->add_option("--k", o.k, "Fixed number of segments (hierarchical)");
  sim->add_option("--kmax", o.k_max, "k ~ Uniform{1..kmax} when --k is absent");
  sim->add_option("--theta", o.theta, "mu0,k0,nu0,sigma0sq (hierarchical)");
  sim->add_option("--jump", o.jump, "Mean after the cut (single)");
  sim->add_option("--sd", o.noise_sd, "Noise standard deviation (single)");
  sim->add_option("--gap-length", o.gap_length, "Missing positions inserted (gap)");
  sim->add_option("--gap", o.gaps, "Positions FIRST-LAST to mark missing; repeatable");
  sim->add_option("--seed", o.seed, "Random seed");
  sim->add_option("--out", o.out, "CSV output path; stdout when omitted");
  sim->add_option("--truth", o.truth, "Truth sidecar path (default: OUT.truth.json)");
  sim->add_option("--format", o.format, "csv (with sidecar) or json")->check(CLI::IsMember({"json", "csv"}));

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  }

  try {
    std::string document, sidecar;
    if (segment->parsed()) {
      document = cmd_segment(o);
    } else if (marginals->parsed()) {
      document = cmd_marginals(o);
    } else if (mcem->parsed()) {
      document = cmd_mcem(o);
    } else {
      if (sim->count("--format") == 0) o.format = "csv";
      document = cmd_simulate(o, sidecar);
    }
    if (o.out.empty()) {
      out << document;
    } else {
      write_atomically(o.out, document);
    }
    if (!sidecar.empty()) {
      const std::string path = !o.truth.empty() ? o.truth : (o.out.empty() ? "" : o.out + ".truth.json");
      if (!path.empty()) write_atomically(path, sidecar);
    }
    return kExitOk;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return exit_code_for(e);
  }
}

}  // namespace bayescp::cli
