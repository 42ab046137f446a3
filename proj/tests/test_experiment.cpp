#include <doctest.h>

#include "magneto/experiment.hpp"
#include "oracles.hpp"
#include "synthetic.hpp"

using namespace magneto;

namespace {

ExperimentConfig base_config(const std::filesystem::path& root, const std::filesystem::path& data) {
  nlohmann::json doc = {{"dataset", data.string()},
                        {"K", 4},
                        {"q", "auto"},
                        {"lr", 0.05},
                        {"l2", 5e-4},
                        {"dropout", 0.2},
                        {"hidden", 16},
                        {"filter", "lr"},
                        {"sign", "auto"},
                        {"protocol", "webpage"},
                        {"seeds", {0, 1, 2}},
                        {"max_epochs", 300},
                        {"patience", 30},
                        {"cache_dir", (root / "cache").string()}};
  return ExperimentConfig::from_json(doc);
}

}  // namespace

TEST_CASE("config parsing") {
  nlohmann::json doc = {{"dataset", "d"}, {"q", "1/3"}, {"protocol", {0.5, 0.25, 0.25}}, {"sign", "high-pass"},
                        {"filter", "ppr"}, {"alpha", 0.2}, {"seeds", {4}}};
  const auto c = ExperimentConfig::from_json(doc);
  CHECK(*c.q == Charge(1, 3));
  CHECK(c.fractions.train == 0.5);
  CHECK(*c.sign == FilterSign::HighPass);
  CHECK(c.filter == FilterKind::PersonalizedPageRank);
  CHECK(c.seeds == std::vector<std::uint64_t>{4});
  const auto round = ExperimentConfig::from_json(c.to_json());
  CHECK(*round.q == Charge(1, 3));
  CHECK(*round.alpha == 0.2);

  CHECK(ExperimentConfig::from_json({{"dataset", "d"}, {"q", 0.25}}).q == Charge(1, 4));
  CHECK_FALSE(ExperimentConfig::from_json({{"dataset", "d"}}).q.has_value());
  CHECK_THROWS(ExperimentConfig::from_json({{"K", 3}}));
  CHECK_THROWS(ExperimentConfig::from_json({{"dataset", "d"}, {"filter", "ppr"}}));
  CHECK_THROWS(ExperimentConfig::from_json({{"dataset", "d"}, {"protocol", "other"}}));
  CHECK_THROWS(ExperimentConfig::from_json({{"dataset", "d"}, {"seeds", nlohmann::json::array()}}));

  const auto texas = reference_config("Texas");
  CHECK(*texas.q == Charge(1, 4));
  CHECK(texas.order == 8);
  CHECK(texas.dropout == 0.4);
  CHECK(reference_config("wisconsin").order == 16);
  CHECK(reference_config("pubmed").fractions.train == 0.05);
  CHECK_THROWS(reference_config("arxiv"));

  CHECK(auto_sign(0.5) == FilterSign::LowPass);
  CHECK(auto_sign(0.49) == FilterSign::HighPass);
}

TEST_CASE("mean and sample std") {
  auto [m, s] = mean_and_std({0.5});
  CHECK(m == 0.5);
  CHECK(s == 0.0);
  std::tie(m, s) = mean_and_std({1.0, 2.0, 3.0, 4.0});
  CHECK(m == 2.5);
  CHECK(s == doctest::Approx(std::sqrt(5.0 / 3.0)));
}

TEST_CASE("prep reports cycles, sign and caches") {
  oracle::TempDir tmp("prep");
  synthetic::write(tmp.path / "data", {}, 1);
  auto cfg = base_config(tmp.path, tmp.path / "data");
  Experiment exp(cfg);
  CHECK(exp.homophily() < 0.5);
  CHECK(exp.sign() == FilterSign::HighPass);

  const auto r = cmd_prep(exp);
  CHECK_FALSE(r.cycles.is_acyclic);
  const auto& cand = r.candidates.values;
  CHECK(std::find(cand.begin(), cand.end(), Charge(1, 3)) != cand.end());
  CHECK(r.prepared.back() == Charge{});
  for (std::size_t i = 0; i < r.prepared.size(); ++i) {
    CHECK_FALSE(r.cache_hits[i]);
    CHECK(std::filesystem::exists(r.caches[i]));
  }
  const auto doc = r.to_json();
  CHECK(doc["sign"] == "high-pass");
  CHECK(doc["cycles"]["histogram"].contains("3"));

  // A fresh process-equivalent run finds every cache on disk.
  Experiment again(cfg);
  const auto r2 = cmd_prep(again);
  for (bool hit : r2.cache_hits) CHECK(hit);
  const auto& a = exp.features(Charge(1, 3));
  const auto& b = again.features(Charge(1, 3));
  CHECK(a.real == b.real);
  CHECK(a.imag == b.imag);
}

TEST_CASE("train is deterministic and self-consistent") {
  oracle::TempDir tmp("train");
  synthetic::write(tmp.path / "data", {}, 2);
  auto cfg = base_config(tmp.path, tmp.path / "data");
  cfg.q = Charge(1, 3);

  Experiment e1(cfg);
  const auto r1 = cmd_train(e1);
  std::filesystem::remove_all(cfg.cache_dir);
  Experiment e2(cfg);
  const auto r2 = cmd_train(e2);
  std::ostringstream j1, j2;
  r1.write_jsonl(j1);
  r2.write_jsonl(j2);
  CHECK(j1.str() == j2.str());
  const auto lines = j1.str();
  CHECK(std::count(lines.begin(), lines.end(), '\n') == 3);

  std::vector<double> accs;
  for (const auto& s : r1.seeds) accs.push_back(s.test_acc);
  const auto [m, s] = mean_and_std(accs);
  CHECK(r1.mean == m);
  CHECK(r1.std == s);
  CHECK(r1.mean >= *std::min_element(accs.begin(), accs.end()));
  CHECK(r1.mean <= *std::max_element(accs.begin(), accs.end()));
  CHECK(r1.std >= 0.0);
  CHECK(r1.mean > 0.6);  // far above chance (1/3) on this easy graph

  cfg.seeds = {7};
  Experiment single(cfg);
  CHECK(cmd_train(single).std == 0.0);
}

TEST_CASE("auto q picks from the candidates") {
  oracle::TempDir tmp("auto");
  synthetic::write(tmp.path / "data", {}, 3);
  auto cfg = base_config(tmp.path, tmp.path / "data");
  cfg.seeds = {0, 1};
  Experiment exp(cfg);
  const auto r = cmd_train(exp);
  auto cand = exp.candidates(true).values;
  CHECK(std::find(cand.begin(), cand.end(), r.chosen_q) != cand.end());
  CHECK(r.q_validation.size() == cand.size());
  double best = -1.0;
  for (const auto& [q, v] : r.q_validation) best = std::max(best, v);
  std::optional<Charge> expected;
  for (const auto& [q, v] : r.q_validation) {
    if (v == best && (!expected || q < *expected)) expected = q;
  }
  CHECK(*expected == r.chosen_q);
}

TEST_CASE("ablation and sweep") {
  oracle::TempDir tmp("ablate");
  synthetic::write(tmp.path / "data", {}, 4);
  auto cfg = base_config(tmp.path, tmp.path / "data");
  cfg.seeds = {0, 1};
  Experiment exp(cfg);
  const auto ab = cmd_ablate_q(exp);
  REQUIRE(ab.q_nonzero.has_value());
  CHECK(ab.q_zero.chosen_q == Charge{});
  CHECK_FALSE(ab.q_nonzero->chosen_q.is_zero());
  CHECK(ab.q_zero.seeds.size() == ab.q_nonzero->seeds.size());

  const auto rows = cmd_sweep_k(exp, {1, 3}, {FilterKind::LinearRank, FilterKind::MarkovDiffusion});
  CHECK(rows.size() == 4);
  const auto csv = sweep_csv(rows);
  CHECK(csv.rfind("filter,K,mean,std,wall_clock_seconds\nlr,1,", 0) == 0);
  CHECK_THROWS(cmd_sweep_k(exp, {}, {FilterKind::LinearRank}));

  synthetic::Shape flat;
  flat.undirected = true;
  synthetic::write(tmp.path / "undirected", flat, 4);
  auto ucfg = base_config(tmp.path, tmp.path / "undirected");
  ucfg.seeds = {0};
  Experiment uexp(ucfg);
  const auto uab = cmd_ablate_q(uexp);
  CHECK_FALSE(uab.q_nonzero.has_value());
  CHECK_FALSE(uab.notice.empty());
  CHECK(uab.to_json()["q_nonzero"].is_null());
}

TEST_CASE("spectrum export") {
  oracle::TempDir tmp("spec");
  synthetic::Shape small;
  small.nodes = 20;
  synthetic::write(tmp.path / "data", small, 5);
  Experiment exp(base_config(tmp.path, tmp.path / "data"));
  const auto csv = cmd_spectrum(exp.dataset().graph, {Charge{}, Charge(1, 3)}, ShiftOperator::RenormalizedAdjacency,
                                Symmetrization::HalfSum);
  CHECK(csv.rfind("q,index,eigenvalue,response_exact,response_approx\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 41);
  CHECK(csv.find("nan") == std::string::npos);
  CHECK(csv.find("inf") == std::string::npos);
}

TEST_CASE("all seeds failing is reported") {
  oracle::TempDir tmp("fail");
  synthetic::Shape tiny;
  tiny.nodes = 6;
  synthetic::write(tmp.path / "data", tiny, 6);
  auto cfg = base_config(tmp.path, tmp.path / "data");
  cfg.q = Charge{};
  cfg.fractions = SplitFractions::citation();  // 2 nodes per class cannot fill three parts
  Experiment exp(cfg);
  CHECK_THROWS_AS(run_fixed_q(exp, Charge{}), std::runtime_error);
}
