#include "polyscat/minkowski.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/Dense>

#include "polyscat/convex_hull.hpp"
#include "polyscat/text_io.hpp"

namespace polyscat {

namespace {

Eigen::MatrixXd normal_matrix(std::span<const Vec3> normals) {
  Eigen::MatrixXd n(3, normals.size());
  for (std::size_t j = 0; j < normals.size(); ++j) n.col(j) = normals[j];
  return n;
}

double squared_sum(const Eigen::VectorXd& r) { return r.squaredNorm(); }

struct Evaluation {
  Eigen::VectorXd residual;
  ConvexPolyhedron shape;
  std::vector<std::size_t> vanished;
};

enum class Form { Area, RootArea };

// Residual a_j(alpha) - A_j, or sqrt(a_j) - sqrt(A_j) for RootArea. A vanished
// plane j gets -(A_j + kappa_j (alpha_j - h_j)) (resp. -(sqrt A_j + (alpha_j - h_j)))
// where h_j is the support value of the current body along nu_j, so its
// derivative keeps pulling the plane back onto the body.
Evaluation evaluate(std::span<const Vec3> normals, std::span<const double> targets, const Eigen::VectorXd& alpha,
                    Form form) {
  std::vector<double> a(alpha.data(), alpha.data() + alpha.size());
  auto hs = halfspace_intersection(normals, a);
  Evaluation ev{Eigen::VectorXd(alpha.size()), std::move(hs.polyhedron), {}};
  for (std::size_t j = 0; j < normals.size(); ++j) {
    if (hs.facet_of_plane[j]) {
      const double got = ev.shape.areas()[*hs.facet_of_plane[j]];
      ev.residual[j] = form == Form::Area ? got - targets[j] : std::sqrt(got) - std::sqrt(targets[j]);
      continue;
    }
    const Vec3 nu = normals[j].normalized();
    double support = -1e300;
    for (const auto& v : ev.shape.vertices()) support = std::max(support, nu.dot(v));
    const double excess = std::max(0.0, alpha[j] - support);
    const double root = std::sqrt(std::max(targets[j], 0.0));
    ev.residual[j] = form == Form::Area ? -(targets[j] + 2.0 * root * excess) : -(root + excess);
    ev.vanished.push_back(j);
  }
  return ev;
}

struct Problem {
  std::span<const Vec3> normals;
  std::span<const double> areas;
  Eigen::MatrixXd nmat;
  double alpha_min;
  double target_scale;
};

struct Solve {
  Eigen::VectorXd alpha;
  Evaluation eval;
  double cost = 0.0;
  std::vector<double> history;
  int iterations = 0;
  bool converged = false;
};

// Levenberg-Marquardt with a forward-difference Jacobian, the box
// alpha >= alpha_min, and a centroid re-gauge after each accepted step.
Solve levenberg_marquardt(const Problem& pb, Eigen::VectorXd alpha, const FitOptions& options, Form form) {
  const std::size_t k = pb.normals.size();
  auto eval = [&](const Eigen::VectorXd& al) { return evaluate(pb.normals, pb.areas, al, form); };
  // Moves the polytope centroid to the origin. With `monotone` the shift is
  // kept only if roundoff does not raise the residual.
  auto regauge = [&](Eigen::VectorXd& al, Evaluation& ev, bool monotone) {
    const Vec3 c = ev.shape.centroid();
    Eigen::VectorXd shifted = al - pb.nmat.transpose() * c;
    if (shifted.minCoeff() < pb.alpha_min) return;
    Evaluation moved = eval(shifted);
    if (monotone && squared_sum(moved.residual) > squared_sum(ev.residual)) return;
    al = shifted;
    ev = std::move(moved);
  };
  const double scale = form == Form::Area ? pb.target_scale
                                          : std::accumulate(pb.areas.begin(), pb.areas.end(), 0.0);

  Solve out{alpha, eval(alpha), 0.0, {}, 0, false};
  regauge(out.alpha, out.eval, false);
  out.cost = squared_sum(out.eval.residual);
  out.history.push_back(out.cost);

  double mu = 1e-3;
  int it = 0;
  for (; it < options.max_iterations; ++it) {
    if (out.cost <= 1e-20 * scale) {
      out.converged = true;
      break;
    }
    Eigen::MatrixXd jac(k, k);
    for (std::size_t j = 0; j < k; ++j) {
      Eigen::VectorXd probe = out.alpha;
      const double h = options.fd_step * out.alpha[j];
      probe[j] += h;
      jac.col(j) = (eval(probe).residual - out.eval.residual) / h;
    }
    const Eigen::MatrixXd jtj = jac.transpose() * jac;
    const Eigen::VectorXd grad = jac.transpose() * out.eval.residual;
    const Eigen::VectorXd diag = jtj.diagonal().cwiseMax(1e-12 * std::max(jtj.diagonal().maxCoeff(), 1e-300));

    bool accepted = false;
    while (mu < 1e12) {
      Eigen::MatrixXd lhs = jtj;
      lhs.diagonal() += mu * diag;
      const Eigen::VectorXd step = lhs.ldlt().solve(-grad);
      const Eigen::VectorXd trial = (out.alpha + step).cwiseMax(pb.alpha_min);
      try {
        Evaluation ev = eval(trial);
        const double trial_cost = squared_sum(ev.residual);
        if (trial_cost < out.cost) {
          const double rel_step = (trial - out.alpha).norm() / out.alpha.norm();
          const double decrease = out.cost - trial_cost;
          out.alpha = trial;
          out.eval = std::move(ev);
          regauge(out.alpha, out.eval, true);
          out.cost = squared_sum(out.eval.residual);
          out.history.push_back(out.cost);
          mu = std::max(mu / 3.0, 1e-12);
          accepted = true;
          if (rel_step < 1e-14 || decrease < 1e-12 * out.cost) out.converged = true;
          break;
        }
      } catch (const Error&) {
        // Trial left the admissible region (e.g. unbounded); damp harder.
      }
      mu *= 4.0;
    }
    if (!accepted) {
      // No descent direction at this damping: a stationary point of the
      // least-squares objective, or a kink in the piecewise-smooth areas.
      out.converged = grad.norm() <= 1e-8 * std::sqrt(scale);
      break;
    }
    if (out.converged) {
      ++it;
      break;
    }
  }
  out.iterations = it;
  return out;
}

}  // namespace

BalancedAreas balance_areas(std::span<const Vec3> normals, std::span<const double> areas) {
  if (normals.size() != areas.size()) throw Error(Errc::InvalidInput, "normals and areas differ in length");
  if (normals.empty()) throw Error(Errc::InvalidInput, "no faces to balance");
  const Eigen::MatrixXd n = normal_matrix(normals);
  const Eigen::VectorXd a = Eigen::Map<const Eigen::VectorXd>(areas.data(), areas.size());
  const Eigen::Matrix3d gram = n * n.transpose();
  const Eigen::Matrix3d pinv = gram.completeOrthogonalDecomposition().pseudoInverse();
  const Eigen::VectorXd corrected = a - n.transpose() * (pinv * (n * a));

  BalancedAreas out;
  const double floor = 1e-6 * a.cwiseAbs().maxCoeff();
  for (Eigen::Index j = 0; j < corrected.size(); ++j) {
    double v = corrected[j];
    if (!(v > floor)) {
      v = floor;
      out.clamped.push_back(static_cast<std::size_t>(j));
    }
    out.areas.push_back(v);
  }
  return out;
}

std::vector<double> facet_areas(std::span<const Vec3> normals, std::span<const double> offsets) {
  return halfspace_intersection(normals, offsets).plane_areas();
}

OffsetFit fit_offsets(std::span<const Vec3> normals, std::span<const double> areas,
                      std::span<const double> initial, const FitOptions& options) {
  const std::size_t k = normals.size();
  if (areas.size() != k || initial.size() != k) throw Error(Errc::InvalidInput, "fit inputs differ in length");
  if (k < 4) throw Error(Errc::SpanDeficient, "at least 4 faces are needed");
  Problem pb{normals, areas, normal_matrix(normals), 0.0, 0.0};
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(pb.nmat);
  const auto sv = svd.singularValues();
  if (sv[2] < 1e-8 * sv[0]) throw Error(Errc::SpanDeficient, "face normals do not span R^3");
  for (double a : areas)
    if (!(a > 0.0)) throw Error(Errc::InvalidInput, "target areas must be positive");

  double mean_root = 0.0;
  for (double a : areas) mean_root += std::sqrt(a);
  mean_root /= static_cast<double>(k);
  pb.alpha_min = options.alpha_min > 0.0 ? options.alpha_min : 1e-3 * mean_root;
  pb.target_scale = std::inner_product(areas.begin(), areas.end(), areas.begin(), 0.0);

  Eigen::VectorXd alpha(k);
  for (std::size_t j = 0; j < k; ++j) alpha[j] = std::max(initial[j], pb.alpha_min);
  // Areas are homogeneous of degree 2 in alpha: rescale the start so its
  // total area matches the target total.
  try {
    const auto start = facet_areas(normals, std::span<const double>(alpha.data(), k));
    const double have = std::accumulate(start.begin(), start.end(), 0.0);
    const double want = std::accumulate(areas.begin(), areas.end(), 0.0);
    if (have > 0.0) alpha = (alpha * std::sqrt(want / have)).cwiseMax(pb.alpha_min);
  } catch (const Error&) {
  }

  // Square-root residuals keep a gradient on nearly vanished facets; the
  // area residual is then minimized from that start.
  const Solve warm = levenberg_marquardt(pb, alpha, options, Form::RootArea);
  Solve sol = levenberg_marquardt(pb, warm.alpha, options, Form::Area);

  OffsetFit fit;
  fit.normals.assign(normals.begin(), normals.end());
  fit.targets.assign(areas.begin(), areas.end());
  fit.history = std::move(sol.history);
  fit.iterations = warm.iterations + sol.iterations;
  fit.converged = sol.converged;
  // Final centroid gauge.
  const Eigen::VectorXd centered = sol.alpha - pb.nmat.transpose() * sol.eval.shape.centroid();
  if (centered.minCoeff() >= pb.alpha_min) {
    sol.alpha = centered;
    sol.eval = evaluate(normals, areas, sol.alpha, Form::Area);
  }
  fit.offsets.assign(sol.alpha.data(), sol.alpha.data() + k);
  fit.residual = squared_sum(sol.eval.residual);
  fit.vanished = sol.eval.vanished;
  return fit;
}

std::string format_fit_report(const OffsetFit& fit) {
  std::string out;
  out += "residual " + text::format_double(fit.residual) + "\n";
  out += "iterations " + std::to_string(fit.iterations) + "\n";
  out += std::string("converged ") + (fit.converged ? "yes" : "no") + "\n";
  out += "vanished";
  if (fit.vanished.empty()) out += " none";
  for (auto j : fit.vanished) out += " " + std::to_string(j + 1);
  out += "\n";
  return out;
}

ConvexPolyhedron hull_polyhedron(std::span<const Vec3> points) {
  const auto tris = convex_hull(points);
  double extent = 0.0;
  for (const auto& p : points) extent = std::max(extent, p.norm());
  const double tol = 1e-9 * std::max(extent, 1e-300);

  // Group hull triangles by supporting plane.
  std::vector<std::pair<Vec3, double>> planes;
  std::vector<std::vector<int>> members;
  for (const auto& t : tris) {
    const Vec3 n = (points[t[1]] - points[t[0]]).cross(points[t[2]] - points[t[0]]).normalized();
    const double off = n.dot(points[t[0]]);
    std::size_t g = 0;
    for (; g < planes.size(); ++g) {
      const bool same = (planes[g].first - n).norm() < 1e-9 &&
                        std::all_of(t.begin(), t.end(), [&](int i) {
                          return std::abs(planes[g].first.dot(points[i]) - planes[g].second) <= tol;
                        });
      if (same) break;
    }
    if (g == planes.size()) {
      planes.emplace_back(n, off);
      members.emplace_back();
    }
    for (int i : t)
      if (std::find(members[g].begin(), members[g].end(), i) == members[g].end()) members[g].push_back(i);
  }
  // Keep only referenced points, reindexed.
  std::vector<int> remap(points.size(), -1);
  std::vector<Vec3> verts;
  std::vector<FaceLoop> faces;
  for (std::size_t g = 0; g < planes.size(); ++g) {
    FaceLoop loop = order_face_loop(points, members[g], planes[g].first);
    for (int& i : loop) {
      if (remap[i] < 0) {
        remap[i] = static_cast<int>(verts.size());
        verts.push_back(points[i]);
      }
      i = remap[i];
    }
    faces.push_back(std::move(loop));
  }
  return build_polyhedron(std::move(verts), std::move(faces));
}

ConvexPolyhedron merge_close_vertices(const ConvexPolyhedron& poly, double threshold) {
  const auto& v = poly.vertices();
  std::vector<int> cluster(v.size(), -1);
  std::vector<Vec3> merged;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (cluster[i] >= 0) continue;
    const int id = static_cast<int>(merged.size());
    // Flood fill so chains of close vertices collapse together.
    std::vector<std::size_t> stack{i};
    cluster[i] = id;
    Vec3 sum = Vec3::Zero();
    int count = 0;
    while (!stack.empty()) {
      const std::size_t a = stack.back();
      stack.pop_back();
      sum += v[a];
      ++count;
      for (std::size_t b = 0; b < v.size(); ++b)
        if (cluster[b] < 0 && (v[a] - v[b]).norm() < threshold) {
          cluster[b] = id;
          stack.push_back(b);
        }
    }
    merged.push_back(sum / count);
  }
  if (merged.size() == v.size()) return poly;
  return hull_polyhedron(merged);
}

}  // namespace polyscat
