#include "aniso_rt/quadrature.hpp"

#include <cmath>

namespace aniso_rt {

namespace {

// Gauss-Legendre nodes/weights on [0,1], exact for degree <= 2n-1.
void gauss_legendre01(int n, std::vector<double>& x, std::vector<double>& w) {
    x.assign(static_cast<size_t>(n), 0.0);
    w.assign(static_cast<size_t>(n), 0.0);
    for (int i = 0; i < n; ++i) {
        // Chebyshev initial guess on [-1,1], Newton on P_n.
        double t = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = t;
            if (n == 1) p1 = t;
            for (int k = 2; k <= n; ++k) {
                double p2 = ((2.0 * k - 1.0) * t * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            double pn = (n == 1) ? t : p1;
            double dpn = n * (t * pn - p0) / (t * t - 1.0);
            double dt = pn / dpn;
            t -= dt;
            if (std::abs(dt) < 1e-16) break;
        }
        double p0 = 1.0, p1 = t;
        for (int k = 2; k <= n; ++k) {
            double p2 = ((2.0 * k - 1.0) * t * p1 - (k - 1.0) * p0) / k;
            p0 = p1;
            p1 = p2;
        }
        double dpn = n * (t * p1 - p0) / (t * t - 1.0);
        double wi = 2.0 / ((1.0 - t * t) * dpn * dpn);
        x[static_cast<size_t>(i)] = 0.5 * (t + 1.0);
        w[static_cast<size_t>(i)] = 0.5 * wi;
    }
}

int nodes_for(int poly_degree) { return poly_degree / 2 + 1; } // exact to 2n-1

} // namespace

QuadratureRule simplex_rule(int d, int degree) {
    if (degree < 0 || degree > kMaxQuadratureDegree)
        throw UnsupportedDegree("quadrature degree " + std::to_string(degree));
    QuadratureRule r;
    r.domain_dim = d;
    r.exact_degree = degree;

    if (d == 1) {
        std::vector<double> x, w;
        gauss_legendre01(nodes_for(degree), x, w);
        for (size_t i = 0; i < x.size(); ++i) {
            r.bary.push_back({1.0 - x[i], x[i], 0.0, 0.0});
            r.weights.push_back(w[i]);
        }
        return r;
    }

    if (d == 2) {
        // Duffy map (xi, eta) -> (xi (1-eta), eta); Jacobian (1-eta) raises
        // the eta-degree by one.
        std::vector<double> xs, ws, ys, wy;
        gauss_legendre01(nodes_for(degree), xs, ws);
        gauss_legendre01(nodes_for(degree + 1), ys, wy);
        for (size_t j = 0; j < ys.size(); ++j)
            for (size_t i = 0; i < xs.size(); ++i) {
                double x = xs[i] * (1.0 - ys[j]);
                double y = ys[j];
                r.bary.push_back({1.0 - x - y, x, y, 0.0});
                r.weights.push_back(ws[i] * wy[j] * (1.0 - ys[j]));
            }
        return r;
    }

    if (d == 3) {
        // z = c, y = b(1-c), x = a(1-b)(1-c); Jacobian (1-b)(1-c)^2.
        std::vector<double> as, wa, bs, wb, cs, wc;
        gauss_legendre01(nodes_for(degree), as, wa);
        gauss_legendre01(nodes_for(degree + 1), bs, wb);
        gauss_legendre01(nodes_for(degree + 2), cs, wc);
        for (size_t kc = 0; kc < cs.size(); ++kc)
            for (size_t kb = 0; kb < bs.size(); ++kb)
                for (size_t ka = 0; ka < as.size(); ++ka) {
                    double z = cs[kc];
                    double y = bs[kb] * (1.0 - z);
                    double x = as[ka] * (1.0 - bs[kb]) * (1.0 - z);
                    double jac = (1.0 - bs[kb]) * (1.0 - z) * (1.0 - z);
                    r.bary.push_back({1.0 - x - y - z, x, y, z});
                    r.weights.push_back(wa[ka] * wb[kb] * wc[kc] * jac);
                }
        return r;
    }

    throw UnsupportedDegree("unsupported domain dimension " + std::to_string(d));
}

namespace {

double sub_simplex_measure(const std::vector<VecD>& verts) {
    const int k = static_cast<int>(verts.size()) - 1;
    if (k == 1) return norm2(verts[1] - verts[0]);
    if (k == 2) {
        VecD e1 = verts[1] - verts[0], e2 = verts[2] - verts[0];
        if (verts[0].d == 2) return 0.5 * std::abs(cross2(e1, e2));
        return 0.5 * norm2(cross3(e1, e2));
    }
    VecD a = verts[1] - verts[0], b = verts[2] - verts[0], c = verts[3] - verts[0];
    return std::abs(dot(a, cross3(b, c))) / 6.0;
}

double factorial(int n) {
    double f = 1.0;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
}

} // namespace

InstantiatedRule instantiate(const QuadratureRule& rule, const std::vector<VecD>& verts) {
    InstantiatedRule out;
    const double meas = sub_simplex_measure(verts);
    const double scale = meas * factorial(rule.domain_dim);
    out.points.reserve(rule.bary.size());
    out.weights.reserve(rule.weights.size());
    for (size_t q = 0; q < rule.bary.size(); ++q) {
        VecD p = VecD::zero(verts[0].d);
        for (size_t i = 0; i < verts.size(); ++i) p = p + rule.bary[q][i] * verts[i];
        out.points.push_back(p);
        out.weights.push_back(rule.weights[q] * scale);
    }
    return out;
}

InstantiatedRule instantiate(const QuadratureRule& rule, const Simplex& s) {
    return instantiate(rule, s.v);
}

FaceRule face_rule(const Simplex& s, int face_index, int degree) {
    auto fv = face_vertices(s, face_index);
    std::vector<VecD> verts;
    for (int i : fv) verts.push_back(s.v[static_cast<size_t>(i)]);

    QuadratureRule base = simplex_rule(s.dim - 1, degree);
    InstantiatedRule inst = instantiate(base, verts);

    FaceRule fr;
    fr.face_index = face_index;
    fr.exact_degree = degree;
    fr.measure = face_measure(s, face_index);
    fr.normal = face_outward_normal(s, face_index);
    fr.points = std::move(inst.points);
    fr.weights = std::move(inst.weights);
    return fr;
}

FaceRule face_rule(int d, int face_index, int degree) {
    Simplex ref = reference_simplex(d == 2 ? ReferenceId::Tri : ReferenceId::Tet1);
    return face_rule(ref, face_index, degree);
}

double lp_norm_vec(const InstantiatedRule& q, double p, const std::function<VecD(const VecD&)>& f) {
    double acc = 0.0;
    for (size_t i = 0; i < q.points.size(); ++i)
        acc += q.weights[i] * std::pow(norm2(f(q.points[i])), p);
    return std::pow(acc, 1.0 / p);
}

double lp_norm_scalar(const InstantiatedRule& q, double p,
                      const std::function<double(const VecD&)>& f) {
    double acc = 0.0;
    for (size_t i = 0; i < q.points.size(); ++i)
        acc += q.weights[i] * std::pow(std::abs(f(q.points[i])), p);
    return std::pow(acc, 1.0 / p);
}

double max_norm_vec(const InstantiatedRule& q, const std::function<VecD(const VecD&)>& f) {
    double m = 0.0;
    for (const auto& x : q.points) m = std::max(m, norm2(f(x)));
    return m;
}

} // namespace aniso_rt
