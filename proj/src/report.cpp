#include "bowendim/report.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

namespace bowendim {

namespace {

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string short_num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

void write_file(const std::filesystem::path& dir, const std::string& name, const std::string& body) {
  std::ofstream out(dir / name, std::ios::binary);
  out << body;
  if (!out.good()) throw ValidationError("output directory is not writable: " + dir.string());
}

std::string quantity_line(const QuantityValue& q) {
  std::string s = short_num(q.value) + " +/- " + short_num(q.uncertainty) + " (" + q.method;
  if (q.depth > 0) s += ", depth " + std::to_string(q.depth);
  s += ")";
  return s;
}

} // namespace

std::vector<std::string> emit_report(std::vector<VerificationReport>& reports, const std::string& output_dir) {
  if (reports.empty()) throw ValidationError("report emission needs at least one report");
  const std::filesystem::path dir(output_dir);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw ValidationError("output directory is not writable: " + output_dir);

  std::vector<std::string> written;
  std::string summary;
  for (auto& rep : reports) {
    rep.artifacts.clear();

    if (rep.details.contains("ladders")) {
      int idx = 0;
      for (const auto& ladder : rep.details["ladders"]) {
        std::string csv = "epsilon,count,log_inv_eps,log_count\n";
        for (const auto& e : ladder["entries"]) {
          const double eps = e["epsilon"].get<double>();
          const double count = e["count"].get<double>();
          csv += num(eps) + "," + num(count) + "," + num(std::log(1.0 / eps)) + "," +
                 num(std::log(std::max(count, 1.0))) + "\n";
        }
        const std::string name = rep.claim + "_anchor" + std::to_string(idx++) + "_ladder.csv";
        write_file(dir, name, csv);
        rep.artifacts.push_back(name);
        written.push_back(name);
      }
    }
    if (rep.details.contains("root")) {
      const auto& r = rep.details["root"];
      std::string csv = "t,pressure\n";
      csv += num(r["t_lo"].get<double>()) + "," + num(r["pressure_lo"].get<double>()) + "\n";
      csv += num(r["t_hi"].get<double>()) + "," + num(r["pressure_hi"].get<double>()) + "\n";
      const std::string name = rep.claim + "_root.csv";
      write_file(dir, name, csv);
      rep.artifacts.push_back(name);
      written.push_back(name);
    }

    const nlohmann::json j = {{"claim", rep.claim}, {"inputs", rep.inputs}, {"lhs", rep.lhs},
                              {"rhs", rep.rhs},     {"margin", rep.margin}, {"verdict", rep.verdict},
                              {"artifacts", rep.artifacts}, {"details", rep.details}};
    const std::string name = "report_" + rep.claim + ".json";
    write_file(dir, name, j.dump(2) + "\n");
    written.push_back(name);

    summary += rep.claim + ": " + rep.verdict + "  margin=" + short_num(rep.margin) +
               "  lhs=" + quantity_line(rep.lhs) + "  rhs=" + quantity_line(rep.rhs) + "\n";
    if (rep.details.contains("not_applicable"))
      summary += "  note: " + rep.details["not_applicable"].get<std::string>() + "\n";
  }
  summary += "note: upper bounds are certified for the upper box dimension, which dominates Hausdorff dimension\n";
  write_file(dir, "summary.txt", summary);
  written.push_back("summary.txt");
  return written;
}

} // namespace bowendim
