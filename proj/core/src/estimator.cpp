#include "dpg/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "dpg/parallel.hpp"

namespace dpg {

Eigen::VectorXd residual_representation(const NormalSystem& sys, const Solution& sol) {
  Eigen::VectorXd r = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(sys.test_block) * sys.n_cells);
  const int tb = sys.test_block;
  for (const MacroBlock& mb : sys.blocks) {
    Eigen::VectorXd xloc(static_cast<Eigen::Index>(mb.b.trial_dofs.size()));
    for (size_t i = 0; i < mb.b.trial_dofs.size(); ++i) xloc(static_cast<Eigen::Index>(i)) = sol.x(mb.b.trial_dofs[i]);
    const Eigen::VectorXd res = mb.b.load - mb.b.B * xloc;
    for (size_t c = 0; c < mb.b.cells.size(); ++c)
      r.segment(static_cast<Eigen::Index>(mb.b.cells[c]) * tb, tb) =
          mb.grams[c].chol.solve(res.segment(static_cast<Eigen::Index>(c) * tb, tb));
  }
  return r;
}

Indicators local_indicators(const Eigen::VectorXd& rtilde, const NormalSystem& sys) {
  Indicators ind;
  ind.eta2.assign(sys.blocks.size(), 0.0);
  const int tb = sys.test_block;
  for (size_t k = 0; k < sys.blocks.size(); ++k) {
    const MacroBlock& mb = sys.blocks[k];
    double s = 0;
    for (size_t c = 0; c < mb.b.cells.size(); ++c) {
      const Eigen::VectorXd rc = rtilde.segment(static_cast<Eigen::Index>(mb.b.cells[c]) * tb, tb);
      s += rc.dot(mb.grams[c].G * rc);
    }
    ind.eta2[k] = s;
    ind.total += s;
  }
  return ind;
}

std::set<int> dorfler_mark(const Indicators& ind, double theta) {
  if (!(theta > 0) || theta > 1) throw std::invalid_argument("dorfler_mark: theta must be in (0,1]");
  std::vector<int> order(ind.eta2.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (ind.eta2[static_cast<size_t>(a)] != ind.eta2[static_cast<size_t>(b)])
      return ind.eta2[static_cast<size_t>(a)] > ind.eta2[static_cast<size_t>(b)];
    return a < b;
  });
  const double target = theta * ind.total * (1.0 - 1e-12);
  std::set<int> marked;
  double cum = 0;
  for (int id : order) {
    if (cum >= target || ind.eta2[static_cast<size_t>(id)] <= 0) break;
    marked.insert(id);
    cum += ind.eta2[static_cast<size_t>(id)];
  }
  return marked;
}

std::vector<AfemRecord> afem_loop(const TransportProblem& problem, TriMesh mesh, int iterations,
                                  double theta, int m, int ell, TraceMode mode, int quad_degree,
                                  double solver_tol) {
  std::vector<AfemRecord> records;
  for (int it = 0; it <= iterations; ++it) {
    auto [meshh, refmap] = red_refine(mesh, ell);
    const CellData cdH = cell_averages(problem, mesh, quad_degree > 0 ? quad_degree : 2 * (m + 2));
    const EdgeClass clsH = classify_edges(mesh, cdH.bbar);
    const TrialSpace trial = build_trial_space(mesh, clsH, m, mode);
    const TestSpace test = build_test_space(meshh, m + 1);
    const DpgWorkspace ws(mesh, meshh, refmap, problem, trial, test, quad_degree);
    const NormalSystem sys = assemble(ws);
    const Solution sol = solve(sys, solver_tol);
    const Eigen::VectorXd rt = residual_representation(sys, sol);
    const Indicators ind = local_indicators(rt, sys);

    AfemRecord rec;
    rec.iteration = it;
    rec.n_triangles = mesh.n_triangles();
    rec.n_dofs = trial.total_dim();
    rec.l2_error = problem.exact_u ? l2_error_u(sol, problem, mesh, trial, ws.quad_degree)
                                   : std::numeric_limits<double>::quiet_NaN();
    rec.total_indicator = ind.total;
    rec.mesh = mesh;
    if (it < iterations) {
      rec.marked = dorfler_mark(ind, theta);
      records.push_back(rec);
      mesh = bisect_refine(mesh, records.back().marked);
    } else {
      records.push_back(rec);
    }
  }
  return records;
}

}  // namespace dpg
