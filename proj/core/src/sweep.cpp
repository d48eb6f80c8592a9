#include "edgeworth/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <map>
#include <mutex>
#include <thread>

#include "edgeworth/csv.hpp"
#include "edgeworth/errors.hpp"

namespace edgeworth {

namespace {

EquilibriumRecord solve_point(const Scenario& scenario, const IntegratorConfig& config, const Vector& p) {
  const NetworkSpec net = weights_from_probabilities(p);
  return integrate_to_equilibrium(scenario.endowments, scenario.params, net, config).record;
}

void summarize(ManifoldDataset& ds, int n) {
  const int count = static_cast<int>(ds.records.size());
  ds.agents.assign(n, AgentSummary{});
  for (int i = 0; i < n; ++i) {
    AgentSummary& a = ds.agents[i];
    a.min_utility = a.max_utility = ds.records.front().final_utilities[i];
    for (int g = 0; g < count; ++g) {
      const double u = ds.records[g].final_utilities[i];
      if (u > a.max_utility) {
        a.max_utility = u;
        a.argmax_index = g;
      }
      a.min_utility = std::min(a.min_utility, u);
      if (ds.grid[g].composition[i] == ds.resolution) a.vertex_index = g;
    }
    a.vertex_utility = ds.records[a.vertex_index].final_utilities[i];
    a.vertex_dominant = a.vertex_utility >= a.max_utility - 1e-9 * std::max(1.0, std::abs(a.max_utility));
  }
  ds.vertex_dominance = std::all_of(ds.agents.begin(), ds.agents.end(), [](const auto& a) { return a.vertex_dominant; });

  ds.non_converged = static_cast<int>(std::count_if(ds.records.begin(), ds.records.end(), [](const auto& r) {
    return r.status != Status::Converged && r.status != Status::AlreadyOptimal;
  }));

  ds.min_pairwise_distance = count > 1 ? std::numeric_limits<double>::infinity() : 0.0;
  for (int a = 0; a < count; ++a) {
    for (int b = a + 1; b < count; ++b) {
      ds.min_pairwise_distance = std::min(
          ds.min_pairwise_distance, (ds.records[a].final_utilities - ds.records[b].final_utilities).norm());
    }
  }

  std::map<std::vector<int>, int> index_of;
  for (int g = 0; g < count; ++g) index_of.emplace(ds.grid[g].composition, g);
  ds.max_adjacent_distance = 0.0;
  for (int g = 0; g < count; ++g) {
    const std::vector<int>& k = ds.grid[g].composition;
    for (int from = 0; from < n; ++from) {
      if (k[from] == 0) continue;
      for (int to = 0; to < n; ++to) {
        if (to == from) continue;
        std::vector<int> nb = k;
        --nb[from];
        ++nb[to];
        const int h = index_of.at(nb);
        if (h <= g) continue;
        ds.max_adjacent_distance = std::max(
            ds.max_adjacent_distance, (ds.records[g].final_utilities - ds.records[h].final_utilities).norm());
      }
    }
  }

  if (ds.resolution % n == 0) {
    for (int g = 0; g < count; ++g) {
      const auto& k = ds.grid[g].composition;
      if (std::all_of(k.begin(), k.end(), [&](int v) { return v == ds.resolution / n; })) {
        const Vector& gains = ds.records[g].utility_gains;
        const double total = gains.sum();
        ds.barycenter_gain_shares = total != 0.0 ? Vector(gains / total) : Vector::Zero(n);
      }
    }
  }
}

}  // namespace

ManifoldDataset run_sweep(const Scenario& scenario, int resolution, int workers) {
  if (resolution < 1) throw RangeError("sweep resolution must be at least 1");
  const int n = scenario.agents();

  ManifoldDataset ds;
  ds.resolution = resolution;
  ds.grid = simplex_grid(n, resolution);
  const std::size_t count = ds.grid.size();
  ds.records.resize(count);
  ds.colors.resize(count);

  IntegratorConfig config = scenario.integrator;
  config.stride = static_cast<int>(std::min<std::int64_t>(config.max_steps, std::numeric_limits<int>::max()));

  if (workers <= 0) workers = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  workers = static_cast<int>(std::min<std::size_t>(static_cast<std::size_t>(workers), count));

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto work = [&] {
    while (true) {
      const std::size_t g = next.fetch_add(1);
      if (g >= count) return;
      try {
        ds.records[g] = solve_point(scenario, config, ds.grid[g].probabilities);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(count);
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  for (int w = 1; w < workers; ++w) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);

  for (std::size_t g = 0; g < count; ++g) {
    if (n == 3) ds.colors[g] = barycentric_color(ds.grid[g].probabilities);
  }
  summarize(ds, n);
  return ds;
}

std::vector<RefinementRow> refinement_table(const Scenario& scenario, const std::vector<int>& resolutions,
                                            int workers) {
  std::vector<RefinementRow> rows;
  for (int r : resolutions) rows.push_back({r, run_sweep(scenario, r, workers).max_adjacent_distance});
  return rows;
}

void write_manifold_csv(std::ostream& os, const ManifoldDataset& ds) {
  if (ds.records.empty()) return;
  const int n = static_cast<int>(ds.grid.front().probabilities.size());
  std::vector<std::string> header{"index"};
  for (int i = 1; i <= n; ++i) header.push_back("p_" + std::to_string(i));
  header.insert(header.end(), {"r", "g", "b"});
  for (int i = 1; i <= n; ++i) header.push_back("u_" + std::to_string(i));
  for (int i = 1; i <= n; ++i) header.push_back("gain_" + std::to_string(i));
  header.insert(header.end(), {"mrs_residual", "steps", "status"});
  write_csv_row(os, header);

  std::vector<std::string> row;
  for (std::size_t g = 0; g < ds.records.size(); ++g) {
    const EquilibriumRecord& r = ds.records[g];
    row.clear();
    row.push_back(std::to_string(g));
    for (int i = 0; i < n; ++i) row.push_back(format_double(ds.grid[g].probabilities[i]));
    if (ds.colors[g]) {
      row.push_back(std::to_string(ds.colors[g]->red));
      row.push_back(std::to_string(ds.colors[g]->green));
      row.push_back(std::to_string(ds.colors[g]->blue));
    } else {
      row.insert(row.end(), {"", "", ""});
    }
    for (int i = 0; i < n; ++i) row.push_back(format_double(r.final_utilities[i]));
    for (int i = 0; i < n; ++i) row.push_back(format_double(r.utility_gains[i]));
    row.push_back(format_double(r.mrs_residual));
    row.push_back(std::to_string(r.steps));
    row.emplace_back(to_string(r.status));
    write_csv_row(os, row);
  }
}

}  // namespace edgeworth
