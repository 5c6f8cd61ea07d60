#include "sauna/metrics.hpp"

#include <fstream>
#include <stdexcept>

#include "sauna/csv.hpp"

namespace sauna {

const std::vector<std::string>& metrics_columns() {
  static const std::vector<std::string> columns = {
      "update_index",       "env_steps_visited", "env_steps_accepted",
      "ep_return_mean",     "ep_return_std",     "episodes",
      "vex_b",              "rejection_fraction", "grad_l1_first_layer",
      "grad_l1_last_layer", "loss_surrogate",    "loss_value",
      "loss_vex",           "entropy",           "approx_kl",
      "eval_return_mean"};
  return columns;
}

void write_metrics_csv(const std::string& path,
                       const std::vector<MetricsRecord>& records) {
  csv::Table table;
  table.header = metrics_columns();
  for (const auto& r : records) {
    table.rows.push_back({
        std::to_string(r.update_index),
        std::to_string(r.env_steps_visited),
        std::to_string(r.env_steps_accepted),
        csv::format_double(r.ep_return_mean),
        csv::format_double(r.ep_return_std),
        std::to_string(r.episodes),
        csv::format_double(r.vex_b),
        csv::format_double(r.rejection_fraction),
        csv::format_double(r.grad_l1_first_layer),
        csv::format_double(r.grad_l1_last_layer),
        csv::format_double(r.loss_surrogate),
        csv::format_double(r.loss_value),
        csv::format_double(r.loss_vex),
        csv::format_double(r.entropy),
        csv::format_double(r.approx_kl),
        csv::format_double(r.eval_return_mean),
    });
  }
  csv::write_file(path, table);
}

void write_timing_csv(const std::string& path,
                      const std::vector<MetricsRecord>& records) {
  csv::Table table;
  table.header = {"update_index", "wall_clock_ms"};
  for (const auto& r : records) {
    table.rows.push_back({std::to_string(r.update_index),
                          csv::format_double(r.wall_clock_ms)});
  }
  csv::write_file(path, table);
}

std::vector<MetricsRecord> read_metrics_csv(const std::string& path) {
  const csv::Table table = csv::read_file(path);
  if (table.header != metrics_columns()) {
    throw std::runtime_error("unexpected metrics schema in " + path);
  }
  std::vector<MetricsRecord> out;
  out.reserve(table.rows.size());
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const auto& row = table.rows[i];
    if (row.size() != table.header.size()) {
      throw std::runtime_error("ragged metrics row in " + path);
    }
    MetricsRecord r;
    r.update_index = std::stol(row[0]);
    r.env_steps_visited = std::stol(row[1]);
    r.env_steps_accepted = std::stol(row[2]);
    r.ep_return_mean = csv::parse_double(row[3]);
    r.ep_return_std = csv::parse_double(row[4]);
    r.episodes = std::stol(row[5]);
    r.vex_b = csv::parse_double(row[6]);
    r.rejection_fraction = csv::parse_double(row[7]);
    r.grad_l1_first_layer = csv::parse_double(row[8]);
    r.grad_l1_last_layer = csv::parse_double(row[9]);
    r.loss_surrogate = csv::parse_double(row[10]);
    r.loss_value = csv::parse_double(row[11]);
    r.loss_vex = csv::parse_double(row[12]);
    r.entropy = csv::parse_double(row[13]);
    r.approx_kl = csv::parse_double(row[14]);
    r.eval_return_mean = csv::parse_double(row[15]);
    out.push_back(r);
  }
  return out;
}

}  // namespace sauna
