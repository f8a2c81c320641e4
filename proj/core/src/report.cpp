#include "histeps/report.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <vector>

namespace histeps {

using nlohmann::json;

namespace {

bool same_value(double a, double b) { return std::abs(a - b) <= 1e-9 * std::max(std::abs(a), std::abs(b)); }

json summarize_run(const json& j) {
  const json& epochs = j.at("epochs");
  if (!epochs.is_array() || epochs.empty()) throw std::runtime_error("run record has no epochs");
  return json{{"rule", j.at("config").at("optimizer").at("rule")},
              {"hyperparameters", j.at("config").at("optimizer")},
              {"metric", j.at("metric")},
              {"best_metric", j.at("best_metric")},
              {"best_epoch", j.at("best_epoch")},
              {"epochs", epochs},
              {"final_params_digest", j.at("final_params_digest")}};
}

json summarize_grid(const json& j) {
  json out{{"metric", j.at("metric")},
           {"cells", j.at("cells").size()},
           {"failures", j.at("failures")},
           {"rule", j.value("rule", json(nullptr))}};
  const json* best = nullptr;
  json per_eps = json::array();
  for (const auto& c : j.at("cells")) {
    if (c.at("best_metric").is_null()) continue;
    const double metric = c.at("best_metric").get<double>();
    if (!best || metric > best->at("best_metric").get<double>()) best = &c;
    const double eps = c.at("epsilon").get<double>();
    auto it = std::find_if(per_eps.begin(), per_eps.end(),
                           [&](const json& e) { return same_value(e.at("epsilon").get<double>(), eps); });
    if (it == per_eps.end()) {
      per_eps.push_back(json{{"epsilon", eps}, {"alpha", c.at("alpha")}, {"best_metric", metric}});
    } else if (metric > it->at("best_metric").get<double>()) {
      (*it)["alpha"] = c.at("alpha");
      (*it)["best_metric"] = metric;
    }
  }
  out["best_cell"] = best ? json{{"alpha", best->at("alpha")},
                                 {"epsilon", best->at("epsilon")},
                                 {"beta2", best->at("beta2")},
                                 {"best_metric", best->at("best_metric")},
                                 {"best_epoch", best->at("best_epoch")}}
                          : json(nullptr);
  out["best_alpha_per_epsilon"] = per_eps;
  return out;
}

json summarize_estimate(const json& j) {
  return json{{"rule", j.at("rule")},
              {"iterations_per_epoch", j.at("iterations_per_epoch")},
              {"epsilon_lower", j.at("epsilon_lower")},
              {"epsilon_upper", j.at("epsilon_upper")},
              {"regime_at_lower", j.at("regime_at_lower").at("regime")},
              {"regime_at_upper", j.at("regime_at_upper").at("regime")},
              {"probe_points", j.at("recommended_probe_points")},
              {"probe_lr", j.at("probe_hyperparameters").at("lr")}};
}

std::string fmt(double x) {
  std::ostringstream s;
  s << std::setprecision(6) << x;
  return s.str();
}

}  // namespace

Report build_report(const std::filesystem::path& dir) {
  namespace fs = std::filesystem;
  std::vector<fs::path> files;
  if (fs::is_directory(dir)) {
    for (const auto& entry : fs::recursive_directory_iterator(dir)) {
      if (!entry.is_regular_file()) continue;
      const auto name = entry.path().filename().string();
      if (name == "run.json" || name == "grid.json" || name == "estimate.json") files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());

  json runs = json::array(), grids = json::array(), estimates = json::array(), corrupt = json::array();
  for (const auto& path : files) {
    const std::string rel = fs::relative(path, dir).generic_string();
    try {
      std::ifstream in(path);
      if (!in) throw std::runtime_error("cannot open");
      const json j = json::parse(in);
      const auto name = path.filename().string();
      json s = name == "run.json" ? summarize_run(j) : name == "grid.json" ? summarize_grid(j) : summarize_estimate(j);
      s["path"] = rel;
      (name == "run.json" ? runs : name == "grid.json" ? grids : estimates).push_back(std::move(s));
    } catch (const std::exception& e) {
      corrupt.push_back(json{{"path", rel}, {"error", e.what()}});
    }
  }

  json recommendations = json::array();
  for (const auto& est : estimates) {
    for (const auto& point : est.at("probe_points")) {
      const double eps = point.get<double>();
      json rec{{"rule", est.at("rule")}, {"epsilon", eps}, {"alpha", est.at("probe_lr")},
               {"source", "probe"}, {"estimate", est.at("path")}};
      double best = -1.0;
      for (const auto& g : grids) {
        if (!g.at("rule").is_null() && g.at("rule") != est.at("rule")) continue;
        for (const auto& e : g.at("best_alpha_per_epsilon")) {
          if (!same_value(e.at("epsilon").get<double>(), eps)) continue;
          if (e.at("best_metric").get<double>() > best) {
            best = e.at("best_metric").get<double>();
            rec["alpha"] = e.at("alpha");
            rec["source"] = g.at("path");
            rec["best_metric"] = best;
          }
        }
      }
      recommendations.push_back(rec);
    }
  }

  Report report;
  report.summary = json{{"runs", runs},
                        {"grids", grids},
                        {"estimates", estimates},
                        {"recommendations", recommendations},
                        {"corrupt", corrupt}};

  std::ostringstream t;
  t << "runs: " << runs.size() << "  grids: " << grids.size() << "  estimates: " << estimates.size()
    << "  corrupt: " << corrupt.size() << "\n";
  for (const auto& r : runs) {
    t << "run " << r.at("path").get<std::string>() << "  " << r.at("rule").get<std::string>() << "  best "
      << r.at("metric").get<std::string>() << " " << fmt(r.at("best_metric").get<double>()) << " at epoch "
      << r.at("best_epoch").get<std::size_t>() << "\n";
  }
  for (const auto& g : grids) {
    t << "grid " << g.at("path").get<std::string>() << "  " << g.at("cells").get<std::size_t>() << " cells, "
      << g.at("failures").get<std::size_t>() << " failed";
    if (!g.at("best_cell").is_null()) {
      const auto& b = g.at("best_cell");
      t << "  best alpha=" << fmt(b.at("alpha").get<double>()) << " eps=" << fmt(b.at("epsilon").get<double>())
        << " beta2=" << fmt(b.at("beta2").get<double>()) << " " << g.at("metric").get<std::string>() << "="
        << fmt(b.at("best_metric").get<double>());
    }
    t << "\n";
  }
  for (const auto& e : estimates) {
    t << "estimate " << e.at("path").get<std::string>() << "  " << e.at("rule").get<std::string>() << "  eps in ["
      << fmt(e.at("epsilon_lower").get<double>()) << ", " << fmt(e.at("epsilon_upper").get<double>()) << "]  "
      << e.at("regime_at_lower").get<std::string>() << " / " << e.at("regime_at_upper").get<std::string>() << "\n";
  }
  for (const auto& r : recommendations) {
    t << "try " << r.at("rule").get<std::string>() << " eps=" << fmt(r.at("epsilon").get<double>())
      << " alpha=" << fmt(r.at("alpha").get<double>()) << "  (" << r.at("source").get<std::string>() << ")\n";
  }
  for (const auto& c : corrupt) {
    t << "unreadable " << c.at("path").get<std::string>() << ": " << c.at("error").get<std::string>() << "\n";
  }
  report.text = t.str();
  return report;
}

}  // namespace histeps
