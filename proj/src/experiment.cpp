#include "magneto/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "magneto/feature_cache.hpp"
#include "magneto/magnetic.hpp"

namespace magneto {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

Charge charge_from_json(const json& v) {
  if (v.is_string()) return Charge::parse(v.get<std::string>());
  if (v.is_number_integer()) return Charge(v.get<std::int64_t>(), 1);
  std::ostringstream s;
  s << std::setprecision(17) << v.get<double>();
  return Charge::parse(s.str());
}

Symmetrization parse_symmetrization(const std::string& name) {
  if (name == "half-sum") return Symmetrization::HalfSum;
  if (name == "max") return Symmetrization::Max;
  throw std::invalid_argument("unknown symmetrization '" + name + "'");
}

std::string to_string(Symmetrization s) { return s == Symmetrization::HalfSum ? "half-sum" : "max"; }

std::string charge_json(Charge q) { return q.to_string(); }

// FNV-1a; stable across runs so cache names stay put.
std::uint64_t fingerprint(const std::string& text) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

}  // namespace

ExperimentConfig ExperimentConfig::from_json(const json& doc) {
  ExperimentConfig c;
  if (!doc.contains("dataset")) throw std::invalid_argument("config needs a 'dataset' path");
  c.dataset = doc.at("dataset").get<std::string>();
  if (doc.contains("format")) c.dataset_format = doc.at("format").get<std::string>();
  if (doc.contains("row_normalize")) c.row_normalize = doc.at("row_normalize").get<bool>();
  if (doc.contains("K")) c.order = doc.at("K").get<int>();
  if (doc.contains("q")) {
    const auto& q = doc.at("q");
    if (!(q.is_string() && q.get<std::string>() == "auto")) c.q = charge_from_json(q);
  }
  if (doc.contains("lr")) c.learning_rate = doc.at("lr").get<double>();
  if (doc.contains("l2")) c.l2 = doc.at("l2").get<double>();
  if (doc.contains("l2_second_layer")) c.l2_second_layer = doc.at("l2_second_layer").get<bool>();
  if (doc.contains("dropout")) c.dropout = doc.at("dropout").get<double>();
  if (doc.contains("hidden")) c.hidden = doc.at("hidden").get<Index>();
  if (doc.contains("filter")) c.filter = parse_filter_kind(doc.at("filter").get<std::string>());
  if (doc.contains("alpha")) c.alpha = doc.at("alpha").get<double>();
  if (doc.contains("t")) c.time = doc.at("t").get<double>();
  if (doc.contains("sign")) {
    const auto s = doc.at("sign").get<std::string>();
    if (s != "auto") c.sign = parse_filter_sign(s);
  }
  if (doc.contains("protocol")) {
    const auto& p = doc.at("protocol");
    if (p.is_array()) {
      if (p.size() != 3) throw std::invalid_argument("protocol array must be [train, val, test]");
      c.fractions = {p[0].get<double>(), p[1].get<double>(), p[2].get<double>()};
    } else if (p.get<std::string>() == "citation") {
      c.fractions = SplitFractions::citation();
    } else if (p.get<std::string>() == "webpage") {
      c.fractions = SplitFractions::webpage();
    } else {
      throw std::invalid_argument("unknown protocol '" + p.get<std::string>() + "'");
    }
  }
  if (doc.contains("seeds")) c.seeds = doc.at("seeds").get<std::vector<std::uint64_t>>();
  if (doc.contains("max_epochs")) c.max_epochs = doc.at("max_epochs").get<int>();
  if (doc.contains("patience")) c.patience = doc.at("patience").get<int>();
  if (doc.contains("symmetrization")) c.symmetrization = parse_symmetrization(doc.at("symmetrization").get<std::string>());
  if (doc.contains("max_cycles")) c.cycle_limits.max_cycles = doc.at("max_cycles").get<std::int64_t>();
  if (doc.contains("max_length")) c.cycle_limits.max_length = doc.at("max_length").get<Index>();
  if (doc.contains("cache_dir")) c.cache_dir = doc.at("cache_dir").get<std::string>();
  if (doc.contains("out_dir")) c.out_dir = doc.at("out_dir").get<std::string>();
  if (c.seeds.empty()) throw std::invalid_argument("config needs at least one seed");
  c.filter_spec(FilterSign::LowPass).validate();
  return c;
}

ExperimentConfig ExperimentConfig::from_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read config " + path.string());
  auto c = from_json(json::parse(in));
  if (c.dataset.is_relative()) c.dataset = path.parent_path() / c.dataset;
  return c;
}

json ExperimentConfig::to_json() const {
  json doc;
  doc["dataset"] = dataset.string();
  doc["format"] = dataset_format;
  doc["row_normalize"] = row_normalize;
  doc["K"] = order;
  doc["q"] = q ? q->to_string() : "auto";
  doc["lr"] = learning_rate;
  doc["l2"] = l2;
  doc["l2_second_layer"] = l2_second_layer;
  doc["dropout"] = dropout;
  doc["hidden"] = hidden;
  doc["filter"] = to_string(filter);
  if (alpha) doc["alpha"] = *alpha;
  if (time) doc["t"] = *time;
  doc["sign"] = sign ? to_string(*sign) : "auto";
  doc["protocol"] = {fractions.train, fractions.val, fractions.test};
  doc["seeds"] = seeds;
  doc["max_epochs"] = max_epochs;
  doc["patience"] = patience;
  doc["symmetrization"] = to_string(symmetrization);
  doc["max_cycles"] = cycle_limits.max_cycles;
  doc["max_length"] = cycle_limits.max_length;
  doc["cache_dir"] = cache_dir.string();
  doc["out_dir"] = out_dir.string();
  return doc;
}

FilterSpec ExperimentConfig::filter_spec(FilterSign resolved_sign) const {
  FilterSpec spec;
  spec.kind = filter;
  spec.order = order;
  spec.alpha = alpha;
  spec.time = time;
  spec.sign = resolved_sign;
  return spec;
}

TrainConfig ExperimentConfig::train_config(std::uint64_t seed) const {
  TrainConfig t;
  t.hidden = hidden;
  t.learning_rate = learning_rate;
  t.l2 = l2;
  t.l2_second_layer = l2_second_layer;
  t.dropout = dropout;
  t.max_epochs = max_epochs;
  t.patience = patience;
  t.seed = seed;
  return t;
}

ExperimentConfig reference_config(const std::string& name) {
  struct Row {
    int order;
    Charge q;
    double lr;
    double l2;
    double dropout;
    bool citation;
  };
  static const std::map<std::string, Row> rows = {
      {"corar", {65, Charge{}, 0.1, 1e-3, 0.5, true}},
      {"citeseerr", {30, Charge{}, 0.1, 1e-3, 0.5, true}},
      {"pubmed", {8, Charge{}, 0.1, 1e-3, 0.3, true}},
      {"cornell", {8, Charge(1, 5), 0.01, 1e-4, 0.2, false}},
      {"texas", {8, Charge(1, 4), 0.01, 1e-4, 0.4, false}},
      {"washington", {8, Charge(1, 5), 0.01, 1e-4, 0.4, false}},
      {"wisconsin", {16, Charge(1, 3), 0.01, 1e-4, 0.1, false}},
  };
  std::string key = name;
  std::transform(key.begin(), key.end(), key.begin(), [](unsigned char ch) { return std::tolower(ch); });
  const auto it = rows.find(key);
  if (it == rows.end()) throw std::invalid_argument("no reference hyper-parameters for '" + name + "'");
  const Row& r = it->second;
  ExperimentConfig c;
  c.order = r.order;
  c.q = r.q;
  c.learning_rate = r.lr;
  c.l2 = r.l2;
  c.dropout = r.dropout;
  c.hidden = 64;
  c.filter = FilterKind::LinearRank;
  c.fractions = r.citation ? SplitFractions::citation() : SplitFractions::webpage();
  return c;
}

FilterSign auto_sign(double homophily) { return homophily >= 0.5 ? FilterSign::LowPass : FilterSign::HighPass; }

Experiment::Experiment(ExperimentConfig config) : config_(std::move(config)) {
  LoadOptions opts;
  opts.format = parse_dataset_format(config_.dataset_format);
  opts.row_normalize = config_.row_normalize;
  dataset_ = load_dataset(config_.dataset, opts);
  homophily_ = homophily_index(dataset_.graph, dataset_.labels);
  sign_ = config_.sign.value_or(auto_sign(homophily_));
}

const CycleReport& Experiment::cycles() {
  if (!cycles_) cycles_ = elementary_cycles(dataset_.graph, config_.cycle_limits);
  return *cycles_;
}

QCandidates Experiment::candidates(bool include_zero) { return q_candidates(cycles(), include_zero); }

void Experiment::set_filter(FilterKind kind, int order) {
  config_.filter = kind;
  config_.order = order;
  config_.filter_spec(sign_).validate();
  features_.clear();
}

fs::path Experiment::cache_path(Charge q) const {
  const auto spec = config_.filter_spec(sign_);
  std::ostringstream name;
  name << dataset_.name << '-' << std::hex << fingerprint(fs::absolute(config_.dataset).lexically_normal().string())
       << std::dec << "-q" << q.num << '_' << q.den << '-' << to_string(spec.kind) << "-K" << spec.order << '-'
       << to_string(spec.sign) << '-' << to_string(config_.symmetrization);
  if (spec.alpha) name << "-a" << *spec.alpha;
  if (spec.time) name << "-t" << *spec.time;
  if (config_.row_normalize) name << "-rownorm";
  name << ".feat";
  return config_.cache_dir / name.str();
}

const ModelInput& Experiment::features(Charge q, bool* cache_hit) {
  for (const auto& [charge, input] : features_) {
    if (charge == q) {
      if (cache_hit) *cache_hit = true;
      return input;
    }
  }
  const auto spec = config_.filter_spec(sign_);
  const auto path = cache_path(q);
  std::optional<FilteredFeatures> filtered;
  if (fs::exists(path)) {
    try {
      auto cached = read_feature_cache(path);
      const bool matches = cached.q == q && cached.spec.kind == spec.kind && cached.spec.order == spec.order &&
                           cached.spec.sign == spec.sign && cached.values.rows() == dataset_.features.rows() &&
                           cached.values.cols() == dataset_.features.cols();
      if (matches) filtered = std::move(cached);
    } catch (const std::exception&) {
      // Unreadable cache: rebuild below.
    }
  }
  if (cache_hit) *cache_hit = filtered.has_value();
  if (!filtered) {
    FilteredFeatures f;
    const auto p = gso(dataset_.graph, q, spec.sign, config_.symmetrization);
    f.values = precompute_features(p, dataset_.features, spec);
    f.spec = spec;
    f.q = q;
    f.dataset = dataset_.name;
    fs::create_directories(config_.cache_dir);
    write_feature_cache(path, f);
    filtered = std::move(f);
  }
  features_.emplace_back(q, ModelInput::from(filtered->values));
  return features_.back().second;
}

nlohmann::ordered_json PrepReport::to_json() const {
  nlohmann::ordered_json doc;
  doc["dataset"] = dataset;
  doc["nodes"] = nodes;
  doc["edges"] = edges;
  doc["features"] = features;
  doc["classes"] = classes;
  doc["homophily"] = homophily;
  doc["sign"] = to_string(sign);
  nlohmann::ordered_json hist = nlohmann::ordered_json::object();
  for (const auto& [m, count] : cycles.histogram()) hist[std::to_string(m)] = count;
  doc["cycles"] = {{"histogram", hist},
                   {"total", cycles.lengths.size()},
                   {"truncated", cycles.truncated},
                   {"acyclic", cycles.is_acyclic}};
  auto cand = nlohmann::ordered_json::array();
  for (const auto& q : candidates.values) cand.push_back(charge_json(q));
  doc["q_candidates"] = cand;
  auto prep = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < prepared.size(); ++i) {
    prep.push_back({{"q", charge_json(prepared[i])}, {"cache", caches[i].string()}, {"cache_hit", static_cast<bool>(cache_hits[i])}});
  }
  doc["prepared"] = prep;
  return doc;
}

PrepReport cmd_prep(Experiment& exp) {
  const auto& ds = exp.dataset();
  PrepReport r;
  r.dataset = ds.name;
  r.nodes = ds.graph.num_nodes();
  r.edges = ds.graph.num_edges();
  r.features = ds.features.cols();
  r.classes = num_classes(ds.labels);
  r.homophily = exp.homophily();
  r.sign = exp.sign();
  r.cycles = exp.cycles();
  r.candidates = exp.candidates();

  std::vector<Charge> qs;
  if (exp.config().q) {
    qs.push_back(*exp.config().q);
  } else {
    qs = exp.candidates(/*include_zero=*/true).values;
  }
  for (const auto& q : qs) {
    bool hit = false;
    exp.features(q, &hit);
    r.prepared.push_back(q);
    r.caches.push_back(exp.cache_path(q));
    r.cache_hits.push_back(hit);
  }
  return r;
}

nlohmann::ordered_json SeedResult::to_json() const {
  nlohmann::ordered_json doc;
  doc["seed"] = seed;
  doc["q"] = charge_json(q);
  if (!error.empty()) {
    doc["error"] = error;
    return doc;
  }
  doc["val_acc"] = val_acc;
  doc["test_acc"] = test_acc;
  doc["best_epoch"] = best_epoch;
  doc["epochs"] = epochs;
  return doc;
}

nlohmann::ordered_json RunReport::summary_json() const {
  nlohmann::ordered_json doc;
  doc["dataset"] = dataset;
  doc["q"] = charge_json(chosen_q);
  doc["homophily"] = homophily;
  doc["sign"] = to_string(sign);
  doc["mean"] = mean;
  doc["std"] = std;
  auto accs = nlohmann::ordered_json::array();
  Index failed = 0;
  for (const auto& s : seeds) {
    if (s.error.empty()) {
      accs.push_back(s.test_acc);
    } else {
      ++failed;
    }
  }
  doc["test_acc"] = accs;
  doc["failed_seeds"] = failed;
  if (!q_validation.empty()) {
    auto qv = nlohmann::ordered_json::array();
    for (const auto& [q, acc] : q_validation) qv.push_back({{"q", charge_json(q)}, {"mean_val_acc", acc}});
    doc["q_validation"] = qv;
  }
  doc["wall_clock_seconds"] = wall_clock_seconds;
  return doc;
}

void RunReport::write_jsonl(std::ostream& out) const {
  for (const auto& s : seeds) out << s.to_json().dump() << '\n';
}

std::pair<double, double> mean_and_std(const std::vector<double>& values) {
  if (values.empty()) return {0.0, 0.0};
  const double n = static_cast<double>(values.size());
  const double mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
  if (values.size() < 2) return {mean, 0.0};
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return {mean, std::sqrt(ss / (n - 1.0))};
}

RunReport run_fixed_q(Experiment& exp, Charge q) {
  const auto start = std::chrono::steady_clock::now();
  const auto& cfg = exp.config();
  const auto& ds = exp.dataset();
  const ModelInput& input = exp.features(q);

  RunReport report;
  report.dataset = ds.name;
  report.chosen_q = q;
  report.homophily = exp.homophily();
  report.sign = exp.sign();
  std::vector<double> accs;
  for (auto seed : cfg.seeds) {
    SeedResult s;
    s.seed = seed;
    s.q = q;
    try {
      const auto split = split_nodes(ds.labels, cfg.fractions, seed);
      const auto result = train(input, ds.labels, split, cfg.train_config(seed), q.is_real_degenerate());
      s.val_acc = result.best_val_acc;
      s.test_acc = evaluate(result.params, input, ds.labels, split.test);
      s.best_epoch = result.best_epoch;
      s.epochs = static_cast<int>(result.history.size());
      accs.push_back(s.test_acc);
    } catch (const std::exception& e) {
      s.error = e.what();
    }
    report.seeds.push_back(std::move(s));
  }
  if (accs.empty()) {
    throw std::runtime_error("all seeds failed for " + ds.name + " at q=" + q.to_string() + ": " +
                             report.seeds.front().error);
  }
  std::tie(report.mean, report.std) = mean_and_std(accs);
  report.wall_clock_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

namespace {

double mean_val_acc(const RunReport& r) {
  std::vector<double> v;
  for (const auto& s : r.seeds) {
    if (s.error.empty()) v.push_back(s.val_acc);
  }
  return mean_and_std(v).first;
}

// Validation-accuracy argmax over qs; ties go to the smaller q.
RunReport select_by_validation(Experiment& exp, const std::vector<Charge>& qs) {
  std::optional<RunReport> best;
  std::vector<std::pair<Charge, double>> table;
  double best_val = -1.0;
  for (const auto& q : qs) {
    auto report = run_fixed_q(exp, q);
    const double val = mean_val_acc(report);
    table.emplace_back(q, val);
    if (!best || val > best_val || (val == best_val && q < best->chosen_q)) {
      best_val = val;
      best = std::move(report);
    }
  }
  best->q_validation = std::move(table);
  return std::move(*best);
}

}  // namespace

RunReport cmd_train(Experiment& exp) {
  if (exp.config().q) return run_fixed_q(exp, *exp.config().q);
  return select_by_validation(exp, exp.candidates(/*include_zero=*/true).values);
}

std::vector<SweepRow> cmd_sweep_k(Experiment& exp, const std::vector<int>& orders, const std::vector<FilterKind>& filters) {
  if (orders.empty()) throw std::invalid_argument("K list must not be empty");
  const Charge q = exp.config().q.value_or(Charge{});
  std::vector<SweepRow> rows;
  for (auto kind : filters) {
    for (int order : orders) {
      exp.set_filter(kind, order);
      const auto start = std::chrono::steady_clock::now();
      const auto report = run_fixed_q(exp, q);
      SweepRow row;
      row.filter = kind;
      row.order = order;
      row.mean = report.mean;
      row.std = report.std;
      row.wall_clock_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      rows.push_back(row);
    }
  }
  return rows;
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::ostringstream out;
  out << std::setprecision(10) << "filter,K,mean,std,wall_clock_seconds\n";
  for (const auto& r : rows) {
    out << to_string(r.filter) << ',' << r.order << ',' << r.mean << ',' << r.std << ',' << r.wall_clock_seconds << '\n';
  }
  return out.str();
}

nlohmann::ordered_json AblationReport::to_json() const {
  nlohmann::ordered_json doc;
  doc["q_zero"] = q_zero.summary_json();
  doc["q_nonzero"] = q_nonzero ? q_nonzero->summary_json() : nlohmann::ordered_json(nullptr);
  if (!notice.empty()) doc["notice"] = notice;
  return doc;
}

AblationReport cmd_ablate_q(Experiment& exp) {
  AblationReport r;
  r.q_zero = run_fixed_q(exp, Charge{});
  if (exp.dataset().graph.is_symmetric()) {
    r.notice = "input graph is undirected; every q gives the same operator, so there is no q != 0 column";
    return r;
  }
  if (exp.cycles().is_acyclic) {
    r.notice = "input graph has no directed cycles; q = 0 is the only candidate";
    return r;
  }
  if (exp.config().q && !exp.config().q->is_zero()) {
    r.q_nonzero = run_fixed_q(exp, *exp.config().q);
  } else {
    auto cand = exp.candidates().values;
    std::erase_if(cand, [](const Charge& q) { return q.is_zero(); });
    r.q_nonzero = select_by_validation(exp, cand);
  }
  return r;
}

std::string cmd_spectrum(const DirectedGraph& g, const std::vector<Charge>& qs, ShiftOperator gso_kind,
                         Symmetrization convention) {
  std::ostringstream out;
  out << std::setprecision(17) << "q,index,eigenvalue,response_exact,response_approx\n";
  for (const auto& q : qs) {
    EigenOptions opts;
    opts.vectors = false;
    const auto lambda =
        hermitian_eigen(magnetic_laplacian(g, q, Normalization::Symmetric, convention).to_dense(), opts).eigenvalues;
    auto exact = frequency_response(g, q, gso_kind, ResponseMode::Exact, convention);
    auto approx = frequency_response(g, q, gso_kind, ResponseMode::Approx, convention);
    if (gso_kind != ShiftOperator::NegativeRenormalized) {
      std::reverse(exact.begin(), exact.end());
      std::reverse(approx.begin(), approx.end());
    }
    for (std::size_t i = 0; i < lambda.size(); ++i) {
      out << q.to_string() << ',' << i << ',' << lambda[i] << ',' << exact[i] << ',' << approx[i] << '\n';
    }
  }
  return out.str();
}

}  // namespace magneto
