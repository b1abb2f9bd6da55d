#pragma once

#include <string>
#include <vector>

#include "lpqa/graph.hpp"

namespace lpqa {

/// One linear constraint over the binary variables. Variable indices
/// 0..V-1 are the vertex indicators y_v; V..V+E-1 are the edge
/// indicators z_e (edge order as in the source graph).
struct LinearConstraint {
    enum class Rel { Le, Ge, Eq };
    std::vector<std::pair<int, double>> terms;  // (variable index, coefficient)
    Rel rel = Rel::Le;
    double rhs = 0.0;
    std::string label;

    bool satisfied(const std::vector<int>& assignment, double tol = 1e-9) const;
};

/// 0-1 ILP for the rooted maximum-weight connected subgraph extraction:
/// maximize theta_vw * sum(w_v y_v) + theta_ew * sum(w_e z_e) subject to
/// the chaining, edge-coupling, abstract-limit and grounding-neighbor
/// constraints.
struct IlpModel {
    int num_vertices = 0;
    int num_edges = 0;
    std::vector<double> y_obj;  // theta_vw * omega_v per vertex
    std::vector<double> z_obj;  // theta_ew * omega_e per edge
    std::vector<std::pair<int, int>> edge_endpoints;
    std::vector<NodeKind> kinds;
    int abstract_limit = 2;
    AblationFlags ablation;
    std::vector<LinearConstraint> constraints;

    int var_y(int v) const { return v; }
    int var_z(int e) const { return num_vertices + e; }

    /// Human-readable LP-format text (objective + constraints).
    std::string dump() const;
};

struct SubgraphSolution {
    enum class Status { Optimal, Infeasible };
    Status status = Status::Infeasible;
    std::vector<int> selected_vertices;  // sorted ascending
    std::vector<int> selected_edges;     // edge indices, sorted ascending
    double objective = 0.0;              // defined only when Optimal
};

IlpModel emit_constraints(const CandidateGraph& graph, int abstract_limit,
                          const AblationFlags& ablation = {});

/// Exact maximization by depth-first implicit enumeration over the vertex
/// indicators with bound pruning; edge indicators are induced (z = y_u & y_v),
/// which the coupling constraints force whenever they are present.
SubgraphSolution solve(const IlpModel& model);

/// Exhaustive subset enumeration, independent of solve(). Ties resolve to
/// the lexicographically smallest vertex set. Rejects graphs > 20 vertices.
SubgraphSolution brute_force_oracle(const CandidateGraph& graph, int abstract_limit,
                                    const AblationFlags& ablation = {});

/// Post-hoc structural check of an Optimal solution against the constraint
/// semantics (root, chaining, induced edges, abstract cap, grounding
/// neighbors) plus objective recomputation. Independent of both solvers.
bool verify_solution(const CandidateGraph& graph, int abstract_limit,
                     const AblationFlags& ablation, const SubgraphSolution& sol,
                     std::string* why = nullptr);

}  // namespace lpqa
