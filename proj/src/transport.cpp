#include "huescan/transport.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace huescan {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kEps = 1e-12;
} // namespace

double solve_transport(const std::vector<double>& supply, const std::vector<double>& demand,
                       const std::vector<double>& cost) {
    const std::size_t m = supply.size();
    const std::size_t n = demand.size();
    if (m == 0 || n == 0 || cost.size() != m * n) {
        throw std::invalid_argument("solve_transport: bad problem shape");
    }
    for (double v : supply) {
        if (v < 0.0) throw std::invalid_argument("solve_transport: negative supply");
    }
    for (double v : demand) {
        if (v < 0.0) throw std::invalid_argument("solve_transport: negative demand");
    }
    for (double v : cost) {
        // Dijkstra on reduced costs assumes a non-negative ground metric.
        if (v < 0.0) throw std::invalid_argument("solve_transport: negative cost");
    }

    const double total_a = std::accumulate(supply.begin(), supply.end(), 0.0);
    const double total_b = std::accumulate(demand.begin(), demand.end(), 0.0);
    if (total_a <= 0.0 || total_b <= 0.0) {
        throw std::invalid_argument("solve_transport: zero total mass");
    }
    if (std::fabs(total_a - total_b) > 1e-6 * std::max(total_a, total_b)) {
        throw std::invalid_argument("solve_transport: unbalanced marginals");
    }

    // Remaining marginals, both scaled to total mass 1.
    std::vector<double> rem_a(m);
    std::vector<double> rem_b(n);
    for (std::size_t i = 0; i < m; ++i) rem_a[i] = supply[i] / total_a;
    for (std::size_t j = 0; j < n; ++j) rem_b[j] = demand[j] / total_b;

    std::vector<double> flow(m * n, 0.0);
    std::vector<double> pot_a(m, 0.0);
    std::vector<double> pot_b(n, 0.0);

    double remaining = 1.0;
    int guard = 0;
    while (remaining > kEps) {
        if (++guard > 100000) {
            throw std::runtime_error("solve_transport: did not converge");
        }

        // Dijkstra on the residual bipartite graph under reduced costs,
        // multi-source from every row with remaining supply.
        const std::size_t nodes = m + n; // 0..m-1 rows, m..m+n-1 columns
        std::vector<double> dist(nodes, kInf);
        std::vector<int> parent(nodes, -1);
        std::vector<bool> done(nodes, false);
        for (std::size_t i = 0; i < m; ++i) {
            if (rem_a[i] > kEps) dist[i] = 0.0;
        }

        for (std::size_t it = 0; it < nodes; ++it) {
            std::size_t u = nodes;
            double best = kInf;
            for (std::size_t v = 0; v < nodes; ++v) {
                if (!done[v] && dist[v] < best) {
                    best = dist[v];
                    u = v;
                }
            }
            if (u == nodes) break;
            done[u] = true;

            if (u < m) {
                const std::size_t i = u;
                for (std::size_t j = 0; j < n; ++j) {
                    const double rc = std::max(0.0, cost[i * n + j] + pot_a[i] - pot_b[j]);
                    if (dist[i] + rc < dist[m + j]) {
                        dist[m + j] = dist[i] + rc;
                        parent[m + j] = static_cast<int>(i);
                    }
                }
            } else {
                const std::size_t j = u - m;
                for (std::size_t i = 0; i < m; ++i) {
                    if (flow[i * n + j] <= kEps) continue;
                    const double rc = std::max(0.0, -cost[i * n + j] + pot_b[j] - pot_a[i]);
                    if (dist[m + j] + rc < dist[i]) {
                        dist[i] = dist[m + j] + rc;
                        parent[i] = static_cast<int>(m + j);
                    }
                }
            }
        }

        // Nearest column with unmet demand.
        std::size_t sink = n;
        double sink_dist = kInf;
        for (std::size_t j = 0; j < n; ++j) {
            if (rem_b[j] > kEps && dist[m + j] < sink_dist) {
                sink_dist = dist[m + j];
                sink = j;
            }
        }
        if (sink == n) {
            throw std::runtime_error("solve_transport: no augmenting path");
        }

        // Walk back to a source, collecting the bottleneck.
        double amount = rem_b[sink];
        std::size_t node = m + sink;
        while (parent[node] >= 0) {
            const std::size_t prev = static_cast<std::size_t>(parent[node]);
            if (prev < m && node >= m) {
                // forward arc prev -> node, unbounded
            } else {
                amount = std::min(amount, flow[node * n + (prev - m)]); // backward arc
            }
            node = prev;
        }
        amount = std::min(amount, rem_a[node]);

        // Apply the augmentation.
        std::size_t cur = m + sink;
        while (parent[cur] >= 0) {
            const std::size_t prev = static_cast<std::size_t>(parent[cur]);
            if (prev < m && cur >= m) {
                flow[prev * n + (cur - m)] += amount;
            } else {
                flow[cur * n + (prev - m)] -= amount;
            }
            cur = prev;
        }
        rem_a[node] -= amount;
        rem_b[sink] -= amount;
        remaining -= amount;

        // Potential update keeps reduced costs non-negative.
        for (std::size_t i = 0; i < m; ++i) {
            if (dist[i] < kInf) pot_a[i] += std::min(dist[i], sink_dist);
        }
        for (std::size_t j = 0; j < n; ++j) {
            if (dist[m + j] < kInf) pot_b[j] += std::min(dist[m + j], sink_dist);
        }
    }

    double total_cost = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            total_cost += flow[i * n + j] * cost[i * n + j];
        }
    }
    return total_cost;
}

} // namespace huescan
