// magneto: command-line front end for the magnetic filtering library.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "magneto/experiment.hpp"
#include "magneto/spectrum.hpp"

using namespace magneto;

namespace {

struct CommonOptions {
  std::string config;
  std::string seed_list;
  std::string q;
  std::string sign;
  std::string cache_dir;
};

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> parts;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (!item.empty()) parts.push_back(item);
  }
  return parts;
}

// "0,3,5" or "0-9" (inclusive), mixable: "0-4,7".
std::vector<std::uint64_t> parse_seed_list(const std::string& text) {
  std::vector<std::uint64_t> seeds;
  for (const auto& part : split_list(text)) {
    const auto dash = part.find('-');
    if (dash == std::string::npos) {
      seeds.push_back(std::stoull(part));
      continue;
    }
    const auto lo = std::stoull(part.substr(0, dash));
    const auto hi = std::stoull(part.substr(dash + 1));
    if (hi < lo) throw std::invalid_argument("bad seed range '" + part + "'");
    for (auto s = lo; s <= hi; ++s) seeds.push_back(s);
  }
  if (seeds.empty()) throw std::invalid_argument("empty seed list");
  return seeds;
}

ExperimentConfig load_config(const CommonOptions& o) {
  auto cfg = ExperimentConfig::from_file(o.config);
  if (!o.seed_list.empty()) cfg.seeds = parse_seed_list(o.seed_list);
  if (!o.q.empty()) {
    if (o.q == "auto") {
      cfg.q.reset();
    } else {
      cfg.q = Charge::parse(o.q);
    }
  }
  if (!o.sign.empty()) {
    if (o.sign == "auto") {
      cfg.sign.reset();
    } else {
      cfg.sign = parse_filter_sign(o.sign);
    }
  }
  if (!o.cache_dir.empty()) cfg.cache_dir = o.cache_dir;
  return cfg;
}

void add_common(CLI::App* cmd, CommonOptions& o) {
  cmd->add_option("--config", o.config, "Experiment config (JSON)")->required()->check(CLI::ExistingFile);
  cmd->add_option("--seed-list", o.seed_list, "Seeds, e.g. 0-9 or 1,4,7");
  cmd->add_option("--q", o.q, "Charge: auto, 1/4, 0.25");
  cmd->add_option("--sign", o.sign, "auto, low-pass or high-pass");
  cmd->add_option("--cache-dir", o.cache_dir, "Directory for feature caches");
}

// Writes to path, or stdout when path is empty or "-".
void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

std::string percent(double v) {
  std::ostringstream s;
  s.setf(std::ios::fixed);
  s.precision(2);
  s << 100.0 * v;
  return s.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Magnetic-Laplacian filters and MGC node classification"};
  app.require_subcommand(1);

  CommonOptions prep_opts;
  auto* prep = app.add_subcommand("prep", "Cycle analysis, homophily and feature caches");
  add_common(prep, prep_opts);

  CommonOptions train_opts;
  std::string jsonl_path;
  std::string summary_path;
  auto* train_cmd = app.add_subcommand("train", "Train every seed; per-seed JSONL plus summary JSON");
  add_common(train_cmd, train_opts);
  train_cmd->add_option("--jsonl", jsonl_path, "Per-seed records (default: stdout)");
  train_cmd->add_option("--summary", summary_path, "Summary JSON (default: stderr)");

  CommonOptions report_opts;
  auto* report = app.add_subcommand("report", "Train every seed and print mean ± std accuracy (%)");
  add_common(report, report_opts);

  CommonOptions sweep_opts;
  std::string k_list = "2,4,8,16,32,64,128,256";
  std::string filter_list = "md,lr";
  std::string sweep_out;
  auto* sweep = app.add_subcommand("sweep-k", "Accuracy per filter and order K (CSV)");
  add_common(sweep, sweep_opts);
  sweep->add_option("--k-list", k_list, "Orders K")->capture_default_str();
  sweep->add_option("--filters", filter_list, "Filter kinds: lr, md, ppr, hkpr")->capture_default_str();
  sweep->add_option("--out", sweep_out, "CSV path (default: stdout)");

  CommonOptions ablate_opts;
  auto* ablate = app.add_subcommand("ablate-q", "Paired runs at q = 0 and the best nonzero q");
  add_common(ablate, ablate_opts);

  CommonOptions spectrum_opts;
  std::string q_list = "0,1/5,1/4,1/3,1/2";
  std::string gso_name = "renormalized-adjacency";
  std::string spectrum_out;
  auto* spectrum = app.add_subcommand("spectrum", "Eigenvalues and frequency responses (CSV)");
  spectrum->add_option("--config", spectrum_opts.config, "Experiment config (JSON)")->required()->check(CLI::ExistingFile);
  spectrum->add_option("--q", q_list, "Comma-separated charges")->capture_default_str();
  spectrum->add_option("--gso", gso_name, "normalized-adjacency, renormalized-adjacency or negative-renormalized")->capture_default_str();
  spectrum->add_option("--out", spectrum_out, "CSV path (default: stdout)");

  CommonOptions maps_opts;
  Index maps_k = 2;
  std::string maps_q = "1/4";
  std::string maps_out;
  auto* maps = app.add_subcommand("eigenmaps", "Leading magnetic eigenvectors per node (CSV)");
  maps->add_option("--config", maps_opts.config, "Experiment config (JSON)")->required()->check(CLI::ExistingFile);
  maps->add_option("--q", maps_q, "Charge")->capture_default_str();
  maps->add_option("--k", maps_k, "Number of eigenvectors")->capture_default_str()->check(CLI::PositiveNumber);
  maps->add_option("--out", maps_out, "CSV path (default: stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*prep) {
      Experiment exp(load_config(prep_opts));
      std::cout << cmd_prep(exp).to_json().dump(2) << '\n';
    } else if (*train_cmd) {
      Experiment exp(load_config(train_opts));
      const auto r = cmd_train(exp);
      std::ostringstream lines;
      r.write_jsonl(lines);
      emit(jsonl_path, lines.str());
      const auto summary = r.summary_json().dump(2) + "\n";
      if (summary_path.empty()) {
        std::cerr << summary;
      } else {
        emit(summary_path, summary);
      }
    } else if (*report) {
      Experiment exp(load_config(report_opts));
      const auto r = cmd_train(exp);
      std::cout << r.dataset << "  q=" << r.chosen_q.to_string() << "  " << to_string(r.sign) << "  H=" << r.homophily
                << "  acc=" << percent(r.mean) << " ± " << percent(r.std) << "  (" << r.seeds.size() << " seeds)\n";
      for (const auto& s : r.seeds) {
        if (!s.error.empty()) std::cout << "  seed " << s.seed << " failed: " << s.error << '\n';
      }
    } else if (*sweep) {
      Experiment exp(load_config(sweep_opts));
      std::vector<int> orders;
      for (const auto& k : split_list(k_list)) orders.push_back(std::stoi(k));
      std::vector<FilterKind> kinds;
      for (const auto& f : split_list(filter_list)) kinds.push_back(parse_filter_kind(f));
      emit(sweep_out, sweep_csv(cmd_sweep_k(exp, orders, kinds)));
    } else if (*ablate) {
      Experiment exp(load_config(ablate_opts));
      const auto r = cmd_ablate_q(exp);
      std::cout << r.to_json().dump(2) << '\n';
      if (!r.notice.empty()) std::cerr << "note: " << r.notice << '\n';
    } else if (*spectrum) {
      Experiment exp(load_config(spectrum_opts));
      std::vector<Charge> qs;
      for (const auto& q : split_list(q_list)) qs.push_back(Charge::parse(q));
      emit(spectrum_out, cmd_spectrum(exp.dataset().graph, qs, parse_shift_operator(gso_name),
                                      exp.config().symmetrization));
    } else if (*maps) {
      Experiment exp(load_config(maps_opts));
      const auto m = eigenmaps(exp.dataset().graph, Charge::parse(maps_q), maps_k, exp.config().symmetrization);
      emit(maps_out, eigenmaps_csv(m));
    }
  } catch (const std::exception& e) {
    std::cerr << "magneto: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
