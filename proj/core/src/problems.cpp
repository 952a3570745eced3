#include "rfhdg/problems.hpp"

#include <cmath>

namespace rfhdg {

DarcyProblem example1() {
  DarcyProblem prob;
  prob.permeability << 10, 2, 2, 100;

  // p = X(x) Y(y) e^{xy} with X = x - x^2, Y = y - y^2.
  auto p = [](const Vec2& v) {
    const double x = v[0], y = v[1];
    return (x - x * x) * (y - y * y) * std::exp(x * y);
  };
  auto grad = [](const Vec2& v) -> Vec2 {
    const double x = v[0], y = v[1];
    const double X = x - x * x, Y = y - y * y;
    const double E = std::exp(x * y);
    const double ax = (1 - 2 * x) * Y, ay = X * (1 - 2 * y);
    return {(ax + y * X * Y) * E, (ay + x * X * Y) * E};
  };
  auto hessian = [](const Vec2& v, double& pxx, double& pxy, double& pyy) {
    const double x = v[0], y = v[1];
    const double X = x - x * x, Y = y - y * y;
    const double A = X * Y;
    const double ax = (1 - 2 * x) * Y, ay = X * (1 - 2 * y);
    const double axx = -2 * Y, ayy = -2 * X, axy = (1 - 2 * x) * (1 - 2 * y);
    const double E = std::exp(x * y);
    pxx = (axx + 2 * y * ax + y * y * A) * E;
    pyy = (ayy + 2 * x * ay + x * x * A) * E;
    pxy = (axy + A + x * ax + y * ay + x * y * A) * E;
  };

  prob.exact_p = p;
  prob.exact_grad_p = grad;
  prob.exact_u = [grad](const Vec2& v) -> Vec2 {
    const Vec2 g = grad(v);
    return {-(10 * g[0] + 2 * g[1]), -(2 * g[0] + 100 * g[1])};
  };
  prob.source = [hessian](const Vec2& v) {
    double pxx, pxy, pyy;
    hessian(v, pxx, pxy, pyy);
    return -(10 * pxx + 4 * pxy + 100 * pyy);
  };
  prob.boundary = p;
  prob.has_exact = true;
  return prob;
}

DarcyProblem example2(int m) {
  if (m < 1) fail(ErrorCode::Config, "oscillation count m must be positive");
  DarcyProblem prob;
  prob.permeability = Mat2::Identity();

  auto p = [m](const Vec2& v) {
    double s = 0;
    for (int i = 1; i <= m; ++i) {
      const double c = std::pow(2.0, i) * M_PI;
      s += std::sin(c * v[0]) * std::sin(c * v[1]);
    }
    return s / m;
  };
  auto grad = [m](const Vec2& v) -> Vec2 {
    Vec2 g = Vec2::Zero();
    for (int i = 1; i <= m; ++i) {
      const double c = std::pow(2.0, i) * M_PI;
      g[0] += c * std::cos(c * v[0]) * std::sin(c * v[1]);
      g[1] += c * std::sin(c * v[0]) * std::cos(c * v[1]);
    }
    return g / m;
  };

  prob.exact_p = p;
  prob.exact_grad_p = grad;
  prob.exact_u = [grad](const Vec2& v) -> Vec2 { return -grad(v); };
  prob.source = [m](const Vec2& v) {
    double s = 0;
    for (int i = 1; i <= m; ++i) {
      const double c = std::pow(2.0, i) * M_PI;
      s += 2 * c * c * std::sin(c * v[0]) * std::sin(c * v[1]);
    }
    return s / m;
  };
  prob.boundary = p;
  prob.has_exact = true;
  return prob;
}

StokesProblem example3(double nu) {
  if (!(nu > 0)) fail(ErrorCode::Config, "viscosity must be positive");
  StokesProblem prob;
  prob.nu = nu;

  auto u = [](const Vec2& v) -> Vec2 {
    const double x = v[0], y = v[1];
    const double sx = std::sin(M_PI * x), sy = std::sin(M_PI * y);
    return {sx * sx * std::sin(2 * M_PI * y), -std::sin(2 * M_PI * x) * sy * sy};
  };
  auto p = [](const Vec2& v) { return std::cos(M_PI * v[0]) * std::cos(M_PI * v[1]); };
  auto grad_u = [](const Vec2& v, double& u1x, double& u1y, double& u2x, double& u2y) {
    const double x = v[0], y = v[1];
    const double sx = std::sin(M_PI * x), sy = std::sin(M_PI * y);
    const double s2x = std::sin(2 * M_PI * x), s2y = std::sin(2 * M_PI * y);
    const double c2x = std::cos(2 * M_PI * x), c2y = std::cos(2 * M_PI * y);
    u1x = M_PI * s2x * s2y;
    u1y = 2 * M_PI * sx * sx * c2y;
    u2x = -2 * M_PI * c2x * sy * sy;
    u2y = -M_PI * s2x * s2y;
  };

  prob.exact_u = u;
  prob.exact_p = p;
  prob.exact_sigma = [nu, p, grad_u](const Vec2& v) -> SymTensor {
    double u1x, u1y, u2x, u2y;
    grad_u(v, u1x, u1y, u2x, u2y);
    const double pv = p(v);
    return {2 * nu * u1x - pv, nu * (u1y + u2x), 2 * nu * u2y - pv};
  };
  prob.source = [nu](const Vec2& v) -> Vec2 {
    const double x = v[0], y = v[1];
    const double sx = std::sin(M_PI * x), sy = std::sin(M_PI * y);
    const double s2x = std::sin(2 * M_PI * x), s2y = std::sin(2 * M_PI * y);
    const double c2x = std::cos(2 * M_PI * x), c2y = std::cos(2 * M_PI * y);
    const double pi2 = M_PI * M_PI;
    const double lap_u1 = 2 * pi2 * c2x * s2y - 4 * pi2 * sx * sx * s2y;
    const double lap_u2 = 4 * pi2 * s2x * sy * sy - 2 * pi2 * s2x * c2y;
    const double px = -M_PI * std::sin(M_PI * x) * std::cos(M_PI * y);
    const double py = -M_PI * std::cos(M_PI * x) * std::sin(M_PI * y);
    return {-nu * lap_u1 + px, -nu * lap_u2 + py};
  };
  prob.boundary = u;
  prob.has_exact = true;
  return prob;
}

CoupledProblem example4(double alpha, double nu) {
  if (!(alpha > 0) || !(nu > 0)) fail(ErrorCode::Config, "alpha and nu must be positive");
  CoupledProblem prob;
  prob.alpha = alpha;
  prob.law = InterfaceLaw::BJ;
  prob.kappa = [](const Vec2&) { return 1.0; };

  // Free flow on (0, pi) x (0, pi).
  StokesProblem& st = prob.stokes;
  st.nu = nu;
  auto u_s = [alpha](const Vec2& v) -> Vec2 {
    const double x = v[0], y = v[1];
    const double sy = std::sin(y);
    return {alpha * std::sin(2 * y) * std::cos(x), alpha * (sy * sy - 2) * std::sin(x)};
  };
  auto p_s = [](const Vec2& v) { return std::sin(2 * v[0]) * std::sin(2 * v[1]); };
  auto grad_u_s = [alpha](const Vec2& v, double& u1x, double& u1y, double& u2x,
                          double& u2y) {
    const double x = v[0], y = v[1];
    const double sy = std::sin(y);
    u1x = -alpha * std::sin(2 * y) * std::sin(x);
    u1y = 2 * alpha * std::cos(2 * y) * std::cos(x);
    u2x = alpha * (sy * sy - 2) * std::cos(x);
    u2y = alpha * std::sin(2 * y) * std::sin(x);
  };
  st.exact_u = u_s;
  st.exact_p = p_s;
  st.exact_sigma = [nu, p_s, grad_u_s](const Vec2& v) -> SymTensor {
    double u1x, u1y, u2x, u2y;
    grad_u_s(v, u1x, u1y, u2x, u2y);
    const double pv = p_s(v);
    return {2 * nu * u1x - pv, nu * (u1y + u2x), 2 * nu * u2y - pv};
  };
  st.source = [alpha, nu](const Vec2& v) -> Vec2 {
    const double x = v[0], y = v[1];
    const double sy = std::sin(y);
    const double lap_u1 = -5 * alpha * std::sin(2 * y) * std::cos(x);
    const double lap_u2 =
        alpha * std::sin(x) * (2 * std::cos(2 * y) - (sy * sy - 2));
    const double px = 2 * std::cos(2 * x) * std::sin(2 * y);
    const double py = 2 * std::sin(2 * x) * std::cos(2 * y);
    return {-nu * lap_u1 + px, -nu * lap_u2 + py};
  };
  st.boundary = u_s;
  st.has_exact = true;

  // Porous flow on (0, pi) x (-pi, 0).
  DarcyProblem& da = prob.darcy;
  da.permeability = alpha * Mat2::Identity();
  auto p_d = [](const Vec2& v) {
    return 2.0 / M_PI * v[1] * (M_PI - v[1]) * std::sin(v[0]);
  };
  auto grad_p_d = [](const Vec2& v) -> Vec2 {
    const double x = v[0], y = v[1];
    return {2.0 / M_PI * y * (M_PI - y) * std::cos(x),
            2.0 / M_PI * (M_PI - 2 * y) * std::sin(x)};
  };
  da.exact_p = p_d;
  da.exact_grad_p = grad_p_d;
  da.exact_u = [alpha, grad_p_d](const Vec2& v) -> Vec2 { return -alpha * grad_p_d(v); };
  da.source = [alpha](const Vec2& v) {
    const double x = v[0], y = v[1];
    return alpha * (2.0 / M_PI * y * (M_PI - y) + 4.0 / M_PI) * std::sin(x);
  };
  da.boundary = p_d;
  da.has_exact = true;
  return prob;
}

BrinkmanProblem example5(double alpha) {
  if (!(alpha > 0)) fail(ErrorCode::Config, "alpha must be positive");
  BrinkmanProblem prob;
  prob.nu = 1.0;
  prob.inv_kappa = alpha * Mat2::Identity();

  // u = (X G'/2, -X' G/2) with X = x^2 (x-1)^2 and G = y^2 (y-1)^2.
  auto quartic = [](double s, double& f, double& d1, double& d2, double& d3) {
    f = s * s * (s - 1) * (s - 1);
    d1 = 4 * s * s * s - 6 * s * s + 2 * s;
    d2 = 12 * s * s - 12 * s + 2;
    d3 = 24 * s - 12;
  };
  auto u = [quartic](const Vec2& v) -> Vec2 {
    double X, X1, X2, X3, G, G1, G2, G3;
    quartic(v[0], X, X1, X2, X3);
    quartic(v[1], G, G1, G2, G3);
    return {0.5 * X * G1, -0.5 * X1 * G};
  };
  auto p = [](const Vec2& v) { return (2 * v[0] - 1) * (2 * v[1] - 1); };

  prob.exact_u = u;
  prob.exact_p = p;
  prob.exact_sigma = [quartic, p](const Vec2& v) -> SymTensor {
    double X, X1, X2, X3, G, G1, G2, G3;
    quartic(v[0], X, X1, X2, X3);
    quartic(v[1], G, G1, G2, G3);
    const double pv = p(v);
    // sigma = 2 eps(u) - p I with nu = 1
    return {X1 * G1 - pv, 0.5 * (X * G2 - X2 * G), -X1 * G1 - pv};
  };
  prob.source = [quartic, alpha](const Vec2& v) -> Vec2 {
    double X, X1, X2, X3, G, G1, G2, G3;
    quartic(v[0], X, X1, X2, X3);
    quartic(v[1], G, G1, G2, G3);
    const double u1 = 0.5 * X * G1, u2 = -0.5 * X1 * G;
    const double lap_u1 = 0.5 * (X2 * G1 + X * G3);
    const double lap_u2 = -0.5 * (X3 * G + X1 * G2);
    const double px = 2 * (2 * v[1] - 1), py = 2 * (2 * v[0] - 1);
    return {alpha * u1 - lap_u1 + px, alpha * u2 - lap_u2 + py};
  };
  prob.boundary = u;
  prob.has_exact = true;
  return prob;
}

namespace {

RunConfig base_example1(SchemeVariant scheme, int k, int n_u, int n_uhat, int n_p) {
  RunConfig c;
  c.example = 1;
  c.scheme = scheme;
  c.nx = c.ny = 3;
  c.k0 = k;
  c.r = 0.6;
  c.n_u = n_u;
  c.n_uhat = n_uhat;
  c.n_p = n_p;
  return c;
}

}  // namespace

std::vector<RunConfig> preset_run_table(const std::string& table_id) {
  std::vector<RunConfig> rows;

  if (table_id == "1" || table_id == "2" || table_id == "3") {
    const SchemeVariant scheme = table_id == "1"   ? SchemeVariant::DarcyHdpg
                                 : table_id == "2" ? SchemeVariant::DarcyHdpgReduced
                                                   : SchemeVariant::DarcyHdpgGlobalTrace;
    const int n_u[] = {6, 15, 28, 45};
    const int n_p[] = {10, 21, 36, 55};
    const int n_uhat_local[] = {3, 5, 7, 9};
    const int n_uhat_global[] = {72, 120, 168, 216};
    for (int cfg = 0; cfg < 4; ++cfg)
      for (int k = 3; k <= 8; ++k)
        rows.push_back(base_example1(scheme, k, n_u[cfg],
                                     table_id == "3" ? n_uhat_global[cfg]
                                                     : n_uhat_local[cfg],
                                     n_p[cfg]));
    return rows;
  }

  if (table_id == "5") {
    const int inv_h[] = {2, 4, 6, 8};
    const double r[] = {2.1, 1.9, 1.6, 1.6};
    for (int i = 0; i < 4; ++i)
      for (int k0 = 2; k0 <= 10; ++k0) {
        RunConfig c;
        c.example = 2;
        c.m = 3;
        c.scheme = SchemeVariant::DarcyHdg;
        c.nx = c.ny = inv_h[i];
        c.k0 = k0;
        c.r = r[i];
        rows.push_back(c);
      }
    return rows;
  }

  if (table_id == "6") {
    const int m[] = {1, 2, 3, 4, 5, 6};
    const int inv_h[] = {8, 8, 16, 16, 32, 32};
    const double r[] = {0.9, 1.1, 1.1, 1.2, 1.1, 1.3};
    for (int i = 0; i < 6; ++i) {
      RunConfig c;
      c.example = 2;
      c.m = m[i];
      c.scheme = SchemeVariant::DarcyHdg;
      c.nx = c.ny = inv_h[i];
      c.k0 = 5;
      c.r = r[i];
      rows.push_back(c);
    }
    return rows;
  }

  if (table_id == "ex3") {
    const double nu[] = {0.1, 0.01, 0.001};
    const int inv_h[] = {2, 3, 4};
    const double r[] = {1.5, 1.2, 0.9};
    for (double n : nu)
      for (int i = 0; i < 3; ++i)
        for (int k0 = 4; k0 <= 10; ++k0) {
          RunConfig c;
          c.example = 3;
          c.nu = n;
          c.scheme = SchemeVariant::Stokes;
          c.nx = c.ny = inv_h[i];
          c.k0 = k0;
          c.r = r[i];
          rows.push_back(c);
        }
    return rows;
  }

  if (table_id == "ex4") {
    const double alpha[] = {0.01, 0.01, 100, 100};
    const double nu[] = {0.001, 0.1, 0.001, 0.1};
    const double r_d[] = {0.7, 0.7, 1.3, 1.3};
    const double r_s[] = {0.6, 0.6, 1.5, 1.5};
    for (int i = 0; i < 4; ++i)
      for (int k0 = 4; k0 <= 9; ++k0) {
        RunConfig c;
        c.example = 4;
        c.alpha = alpha[i];
        c.nu = nu[i];
        c.scheme = SchemeVariant::StokesDarcy;
        c.nx = 3;
        c.ny = 6;
        c.k0 = k0;
        c.r_darcy = r_d[i];
        c.r_stokes = r_s[i];
        c.interface_samples = 30;
        rows.push_back(c);
      }
    return rows;
  }

  if (table_id == "ex5") {
    const double alpha[] = {1e-3, 1.0, 1e3};
    const int inv_h[] = {2, 3, 4};
    const double r[] = {0.8, 0.9, 0.9};
    for (double a : alpha)
      for (int i = 0; i < 3; ++i)
        for (int k0 = 3; k0 <= 8; ++k0) {
          RunConfig c;
          c.example = 5;
          c.alpha = a;
          c.scheme = SchemeVariant::Brinkman;
          c.nx = c.ny = inv_h[i];
          c.k0 = k0;
          c.r = r[i];
          rows.push_back(c);
        }
    return rows;
  }

  fail(ErrorCode::Config, "unknown preset table '" + table_id + "'");
}

}  // namespace rfhdg
