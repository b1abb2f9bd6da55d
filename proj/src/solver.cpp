#include "lpqa/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace lpqa {

namespace {
constexpr double kTol = 1e-9;
}

bool LinearConstraint::satisfied(const std::vector<int>& assignment, double tol) const {
    double lhs = 0.0;
    for (const auto& [var, coeff] : terms) lhs += coeff * assignment[var];
    switch (rel) {
        case Rel::Le: return lhs <= rhs + tol;
        case Rel::Ge: return lhs >= rhs - tol;
        case Rel::Eq: return std::abs(lhs - rhs) <= tol;
    }
    return false;
}

IlpModel emit_constraints(const CandidateGraph& graph, int abstract_limit,
                          const AblationFlags& ablation) {
    IlpModel m;
    m.num_vertices = static_cast<int>(graph.nodes.size());
    m.num_edges = static_cast<int>(graph.edges.size());
    m.abstract_limit = abstract_limit;
    m.ablation = ablation;

    const ThetaParams& theta = graph.theta;
    for (const auto& n : graph.nodes) {
        m.kinds.push_back(n.kind);
        m.y_obj.push_back(theta.vw * n.weight);
    }
    for (const auto& e : graph.edges) {
        m.edge_endpoints.emplace_back(e.u, e.v);
        m.z_obj.push_back(theta.ew * e.weight);
    }

    std::vector<std::vector<int>> neighbors(m.num_vertices);
    for (const auto& e : graph.edges) {
        neighbors[e.u].push_back(e.v);
        neighbors[e.v].push_back(e.u);
    }

    if (!ablation.no_chaining) {
        // Root: the subgraph always contains the question node.
        m.constraints.push_back({{{m.var_y(0), 1.0}},
                                 LinearConstraint::Rel::Eq,
                                 1.0,
                                 "root"});
        // Chaining: a selected vertex needs a selected neighbor.
        for (int v = 0; v < m.num_vertices; ++v) {
            LinearConstraint c;
            c.terms.push_back({m.var_y(v), 1.0});
            for (int u : neighbors[v]) c.terms.push_back({m.var_y(u), -1.0});
            c.rel = LinearConstraint::Rel::Le;
            c.rhs = 0.0;
            c.label = "chain_" + std::to_string(v);
            m.constraints.push_back(std::move(c));
        }
        // Edge coupling: z_e = y_u AND y_v.
        for (int e = 0; e < m.num_edges; ++e) {
            const auto [u, v] = m.edge_endpoints[e];
            m.constraints.push_back({{{m.var_z(e), 1.0}, {m.var_y(u), -1.0}},
                                     LinearConstraint::Rel::Le,
                                     0.0,
                                     "edge_u_" + std::to_string(e)});
            m.constraints.push_back({{{m.var_z(e), 1.0}, {m.var_y(v), -1.0}},
                                     LinearConstraint::Rel::Le,
                                     0.0,
                                     "edge_v_" + std::to_string(e)});
            m.constraints.push_back(
                {{{m.var_z(e), 1.0}, {m.var_y(u), -1.0}, {m.var_y(v), -1.0}},
                 LinearConstraint::Rel::Ge,
                 -1.0,
                 "edge_both_" + std::to_string(e)});
        }
    }

    {
        LinearConstraint c;
        for (int v = 0; v < m.num_vertices; ++v) {
            if (m.kinds[v] == NodeKind::Abstract) c.terms.push_back({m.var_y(v), 1.0});
        }
        c.rel = LinearConstraint::Rel::Le;
        c.rhs = static_cast<double>(abstract_limit);
        c.label = "abstract_limit";
        m.constraints.push_back(std::move(c));
    }

    if (!ablation.no_grounding_neighbor) {
        // A selected grounding fact needs >= 2 selected neighbors among
        // abstract facts and the question node.
        for (int g = 0; g < m.num_vertices; ++g) {
            if (m.kinds[g] != NodeKind::Grounding) continue;
            LinearConstraint c;
            for (int u : neighbors[g]) {
                if (m.kinds[u] != NodeKind::Grounding)
                    c.terms.push_back({m.var_y(u), 1.0});
            }
            c.terms.push_back({m.var_y(g), -2.0});
            c.rel = LinearConstraint::Rel::Ge;
            c.rhs = 0.0;  // sum_{u} y_u - 2 y_g >= 0, equivalent form
            c.label = "grounding_" + std::to_string(g);
            m.constraints.push_back(std::move(c));
        }
    }
    return m;
}

std::string IlpModel::dump() const {
    std::ostringstream os;
    os << "maximize\n ";
    for (int v = 0; v < num_vertices; ++v) {
        os << (v ? " + " : " ") << y_obj[v] << " y" << v;
    }
    for (int e = 0; e < num_edges; ++e) {
        os << " + " << z_obj[e] << " z" << e;
    }
    os << "\nsubject to\n";
    for (const auto& c : constraints) {
        os << " " << c.label << ":";
        for (const auto& [var, coeff] : c.terms) {
            const char* name = var < num_vertices ? "y" : "z";
            const int idx = var < num_vertices ? var : var - num_vertices;
            os << " " << (coeff >= 0 ? "+" : "") << coeff << " " << name << idx;
        }
        switch (c.rel) {
            case LinearConstraint::Rel::Le: os << " <= "; break;
            case LinearConstraint::Rel::Ge: os << " >= "; break;
            case LinearConstraint::Rel::Eq: os << " = "; break;
        }
        os << c.rhs << "\n";
    }
    os << "binary\n ";
    for (int v = 0; v < num_vertices; ++v) os << "y" << v << " ";
    for (int e = 0; e < num_edges; ++e) os << "z" << e << " ";
    os << "\n";
    return os.str();
}

namespace {

/// Shared by both solvers: objective of a vertex subset with induced edges.
double induced_objective(const IlpModel& m, const std::vector<int>& y) {
    double obj = 0.0;
    for (int v = 0; v < m.num_vertices; ++v)
        if (y[v]) obj += m.y_obj[v];
    for (int e = 0; e < m.num_edges; ++e) {
        const auto [u, v] = m.edge_endpoints[e];
        if (y[u] && y[v]) obj += m.z_obj[e];
    }
    return obj;
}

/// Feasibility of a full y assignment (z induced) against the emitted
/// constraint list.
bool feasible(const IlpModel& m, const std::vector<int>& y) {
    std::vector<int> assignment(m.num_vertices + m.num_edges, 0);
    for (int v = 0; v < m.num_vertices; ++v) assignment[v] = y[v];
    for (int e = 0; e < m.num_edges; ++e) {
        const auto [u, v] = m.edge_endpoints[e];
        assignment[m.num_vertices + e] = y[u] && y[v];
    }
    for (const auto& c : m.constraints) {
        if (!c.satisfied(assignment)) return false;
    }
    return true;
}

struct SearchState {
    const IlpModel& model;
    std::vector<int> y;
    std::vector<double> max_rest;  // optimistic remaining gain from depth d on
    std::vector<std::vector<std::pair<int, double>>> back_edges;  // to smaller index
    double best = -std::numeric_limits<double>::infinity();
    std::vector<int> best_y;
    bool found = false;

    explicit SearchState(const IlpModel& m) : model(m), y(m.num_vertices, 0) {
        back_edges.resize(m.num_vertices);
        for (int e = 0; e < m.num_edges; ++e) {
            auto [u, v] = m.edge_endpoints[e];
            if (u > v) std::swap(u, v);
            back_edges[v].push_back({u, m.z_obj[e]});
        }
        max_rest.assign(m.num_vertices + 1, 0.0);
        for (int d = m.num_vertices - 1; d >= 0; --d) {
            double gain = std::max(0.0, m.y_obj[d]);
            for (const auto& [u, w] : back_edges[d]) gain += std::max(0.0, w);
            max_rest[d] = max_rest[d + 1] + gain;
        }
    }

    void dfs(int depth, double committed, int abstract_count) {
        if (committed + max_rest[depth] <= best + 1e-12 && found) return;
        if (depth == model.num_vertices) {
            if (feasible(model, y) && (!found || committed > best)) {
                best = committed;
                best_y = y;
                found = true;
            }
            return;
        }
        const bool is_abstract = model.kinds[depth] == NodeKind::Abstract;
        const bool root_forced = depth == 0 && !model.ablation.no_chaining;
        // Select branch.
        if (!is_abstract || abstract_count < model.abstract_limit) {
            double gain = model.y_obj[depth];
            for (const auto& [u, w] : back_edges[depth])
                if (y[u]) gain += w;
            y[depth] = 1;
            dfs(depth + 1, committed + gain, abstract_count + (is_abstract ? 1 : 0));
            y[depth] = 0;
        }
        // Reject branch.
        if (!root_forced) dfs(depth + 1, committed, abstract_count);
    }
};

SubgraphSolution from_assignment(const IlpModel& m, const std::vector<int>& y,
                                 double objective) {
    SubgraphSolution sol;
    sol.status = SubgraphSolution::Status::Optimal;
    sol.objective = objective;
    for (int v = 0; v < m.num_vertices; ++v)
        if (y[v]) sol.selected_vertices.push_back(v);
    for (int e = 0; e < m.num_edges; ++e) {
        const auto [u, v] = m.edge_endpoints[e];
        if (y[u] && y[v]) sol.selected_edges.push_back(e);
    }
    return sol;
}

}  // namespace

SubgraphSolution solve(const IlpModel& model) {
    SearchState state(model);
    state.dfs(0, 0.0, 0);
    if (!state.found) return {};
    return from_assignment(model, state.best_y, state.best);
}

SubgraphSolution brute_force_oracle(const CandidateGraph& graph, int abstract_limit,
                                    const AblationFlags& ablation) {
    const int n = static_cast<int>(graph.nodes.size());
    if (n > 20) throw ConfigError("brute_force_oracle limited to 20 vertices");

    const IlpModel m = emit_constraints(graph, abstract_limit, ablation);
    bool found = false;
    double best = -std::numeric_limits<double>::infinity();
    std::vector<int> best_y;

    std::vector<int> y(n, 0);
    for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
        for (int v = 0; v < n; ++v) y[v] = (mask >> v) & 1u;

        // Direct structural checks, mirroring the constraint semantics.
        if (!ablation.no_chaining && !y[0]) continue;
        int abstract_count = 0;
        for (int v = 0; v < n; ++v)
            if (y[v] && m.kinds[v] == NodeKind::Abstract) ++abstract_count;
        if (abstract_count > abstract_limit) continue;

        std::vector<int> selected_neighbors(n, 0);
        std::vector<int> selected_aq_neighbors(n, 0);
        for (const auto& e : graph.edges) {
            if (y[e.v]) {
                ++selected_neighbors[e.u];
                if (m.kinds[e.v] != NodeKind::Grounding) ++selected_aq_neighbors[e.u];
            }
            if (y[e.u]) {
                ++selected_neighbors[e.v];
                if (m.kinds[e.u] != NodeKind::Grounding) ++selected_aq_neighbors[e.v];
            }
        }
        bool ok = true;
        for (int v = 0; v < n && ok; ++v) {
            if (!y[v]) continue;
            if (!ablation.no_chaining && selected_neighbors[v] < 1) ok = false;
            if (!ablation.no_grounding_neighbor &&
                m.kinds[v] == NodeKind::Grounding && selected_aq_neighbors[v] < 2)
                ok = false;
        }
        if (!ok) continue;

        const double obj = induced_objective(m, y);
        if (!found || obj > best + kTol) {
            best = obj;
            best_y = y;
            found = true;
        } else if (std::abs(obj - best) <= kTol) {
            // Lexicographically smallest vertex set among optima.
            auto as_vertices = [n](const std::vector<int>& yy) {
                std::vector<int> vs;
                for (int v = 0; v < n; ++v)
                    if (yy[v]) vs.push_back(v);
                return vs;
            };
            if (as_vertices(y) < as_vertices(best_y)) best_y = y;
        }
    }
    if (!found) return {};
    return from_assignment(m, best_y, best);
}

bool verify_solution(const CandidateGraph& graph, int abstract_limit,
                     const AblationFlags& ablation, const SubgraphSolution& sol,
                     std::string* why) {
    auto fail = [&](const std::string& msg) {
        if (why) *why = msg;
        return false;
    };
    if (sol.status != SubgraphSolution::Status::Optimal)
        return fail("not an Optimal solution");

    const int n = static_cast<int>(graph.nodes.size());
    std::vector<int> y(n, 0);
    for (int v : sol.selected_vertices) {
        if (v < 0 || v >= n) return fail("vertex out of range");
        y[v] = 1;
    }
    if (!ablation.no_chaining && !y[0]) return fail("root (question node) not selected");

    int abstract_count = 0;
    for (int v = 0; v < n; ++v)
        if (y[v] && graph.is_abstract(v)) ++abstract_count;
    if (abstract_count > abstract_limit) return fail("abstract limit exceeded");

    // Selected edges must be exactly the induced edges (z = y AND y).
    std::vector<int> z(graph.edges.size(), 0);
    for (int e : sol.selected_edges) z[e] = 1;
    for (std::size_t e = 0; e < graph.edges.size(); ++e) {
        const int induced = y[graph.edges[e].u] && y[graph.edges[e].v];
        if (!ablation.no_chaining && z[e] != induced)
            return fail("edge coupling violated at edge " + std::to_string(e));
        if (ablation.no_chaining && z[e] && !induced)
            return fail("edge selected without both endpoints");
    }

    std::vector<int> selected_neighbors(n, 0), selected_aq_neighbors(n, 0);
    for (const auto& e : graph.edges) {
        if (y[e.v]) {
            ++selected_neighbors[e.u];
            if (!graph.is_grounding(e.v)) ++selected_aq_neighbors[e.u];
        }
        if (y[e.u]) {
            ++selected_neighbors[e.v];
            if (!graph.is_grounding(e.u)) ++selected_aq_neighbors[e.v];
        }
    }
    for (int v = 0; v < n; ++v) {
        if (!y[v]) continue;
        if (!ablation.no_chaining && selected_neighbors[v] < 1)
            return fail("chaining violated at vertex " + std::to_string(v));
        if (!ablation.no_grounding_neighbor && graph.is_grounding(v) &&
            selected_aq_neighbors[v] < 2)
            return fail("grounding-neighbor violated at vertex " + std::to_string(v));
    }

    // Objective recomputation from the selected sets and stored weights.
    double obj = 0.0;
    for (int v = 0; v < n; ++v)
        if (y[v]) obj += graph.theta.vw * graph.nodes[v].weight;
    for (std::size_t e = 0; e < graph.edges.size(); ++e)
        if (z[e]) obj += graph.theta.ew * graph.edges[e].weight;
    if (std::abs(obj - sol.objective) > kTol)
        return fail("objective mismatch: recomputed " + std::to_string(obj));
    return true;
}

}  // namespace lpqa
