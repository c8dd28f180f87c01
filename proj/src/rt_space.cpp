#include "aniso_rt/rt_space.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <tuple>

namespace aniso_rt {

int rt_dim(int k, int d) {
    if (d == 2) return (k + 1) * (k + 3);
    return (k + 1) * (k + 2) * (k + 4) / 2;
}

namespace {

double mono_eval(const MultiIndex& m, const VecD& y) {
    double v = 1.0;
    for (int i = 0; i < m.dim; ++i)
        for (int e = 0; e < m.e[static_cast<size_t>(i)]; ++e) v *= y[i];
    return v;
}

} // namespace

VecD RTGenerator::value(const VecD& x) const {
    VecD y = (1.0 / scale) * (x - shift);
    double m = mono_eval(mono, y);
    if (!radial) {
        VecD v = VecD::zero(x.d);
        v[component] = m;
        return v;
    }
    return m * (x - shift);
}

double RTGenerator::divergence(const VecD& x) const {
    VecD y = (1.0 / scale) * (x - shift);
    if (!radial) {
        int e = mono.e[static_cast<size_t>(component)];
        if (e == 0) return 0.0;
        MultiIndex dm = mono;
        dm.e[static_cast<size_t>(component)] -= 1;
        return e / scale * mono_eval(dm, y);
    }
    // div((x - c) m(y)) = (d + |m|) m(y)
    return (x.d + mono.order()) * mono_eval(mono, y);
}

namespace {

// Degree used when applying DOFs to smooth fields; also integrates the
// moment matrix (degree <= 2k+1 there) exactly.
int dof_quad_degree(int k) {
    (void)k;
    return kMaxQuadratureDegree;
}

std::vector<MultiIndex> monos_up_to(int dim, int deg) {
    std::vector<MultiIndex> out;
    for (int t = 0; t <= deg; ++t)
        for (auto& m : multi_indices(dim, t)) out.push_back(m);
    return out;
}

// Orthonormalize face-chart monomials up to degree k against the quadrature
// inner product; returns values of the resulting basis at the face points.
std::vector<std::vector<double>> orthonormal_face_polys(
    int k, int chart_dim, const std::vector<std::array<double, 4>>& bary,
    const std::vector<double>& weights) {
    auto monos = monos_up_to(chart_dim, k);
    const size_t np = bary.size();
    const size_t nb = monos.size();

    // Raw monomial values at points (chart coords are the trailing
    // barycentric coordinates).
    std::vector<std::vector<double>> vals(nb, std::vector<double>(np));
    for (size_t m = 0; m < nb; ++m)
        for (size_t q = 0; q < np; ++q) {
            VecD u = VecD::zero(chart_dim == 1 ? 2 : chart_dim); // storage only
            u.d = chart_dim;
            for (int c = 0; c < chart_dim; ++c) u[c] = bary[q][static_cast<size_t>(c + 1)];
            vals[m][q] = mono_eval(monos[m], u);
        }

    auto inner = [&](const std::vector<double>& a, const std::vector<double>& b) {
        double s = 0.0;
        for (size_t q = 0; q < np; ++q) s += weights[q] * a[q] * b[q];
        return s;
    };

    // Modified Gram-Schmidt on the value tables.
    std::vector<std::vector<double>> basis;
    for (size_t m = 0; m < nb; ++m) {
        std::vector<double> cur = vals[m];
        for (const auto& prev : basis) {
            double c = inner(cur, prev);
            for (size_t q = 0; q < np; ++q) cur[q] -= c * prev[q];
        }
        double nrm = std::sqrt(inner(cur, cur));
        for (size_t q = 0; q < np; ++q) cur[q] /= nrm;
        basis.push_back(std::move(cur));
    }
    return basis;
}

std::unique_ptr<RTSpace> make_space(int k, int d, ReferenceId ref, const Simplex& element,
                                    const VecD& shift, double scale) {
    auto sp = std::make_unique<RTSpace>();
    sp->k = k;
    sp->dim = d;
    sp->reference_id = ref;
    sp->N = rt_dim(k, d);

    for (const auto& m : monos_up_to(d, k))
        for (int c = 0; c < d; ++c)
            sp->generators.push_back({false, c, m, shift, scale});
    for (const auto& m : multi_indices(d, k)) sp->generators.push_back({true, 0, m, shift, scale});

    const int qdeg = dof_quad_degree(k);

    // Face DOF caches with per-face orthonormal polynomial values.
    QuadratureRule face_base = simplex_rule(d - 1, qdeg);
    for (int f = 0; f <= d; ++f) {
        RTSpace::FaceDofCache cache;
        cache.normal = face_outward_normal(element, f);
        cache.measure = face_measure(element, f);
        auto fverts = face_vertices(element, f);
        std::vector<VecD> verts;
        for (int i : fverts) verts.push_back(element.v[static_cast<size_t>(i)]);
        InstantiatedRule inst = instantiate(face_base, verts);
        cache.points = inst.points;
        cache.weights = inst.weights;
        cache.poly_vals = orthonormal_face_polys(k, d - 1, face_base.bary, cache.weights);
        size_t npolys = cache.poly_vals.size();
        sp->face_cache.push_back(std::move(cache));
        for (size_t p = 0; p < npolys; ++p)
            sp->dofs.push_back({DofDescriptor::Kind::Face, f, static_cast<int>(p), 0});
    }

    // Interior DOF cache (empty for k = 0).
    QuadratureRule vol = simplex_rule(d, qdeg);
    InstantiatedRule vinst = instantiate(vol, element);
    sp->interior_cache.points = vinst.points;
    sp->interior_cache.weights = vinst.weights;
    if (k >= 1) {
        sp->interior_cache.monos = monos_up_to(d, k - 1);
        for (const auto& m : sp->interior_cache.monos) {
            std::vector<double> mv(vinst.points.size());
            for (size_t q = 0; q < mv.size(); ++q) {
                VecD y = (1.0 / scale) * (vinst.points[q] - shift);
                mv[q] = mono_eval(m, y);
            }
            sp->interior_cache.mono_vals.push_back(std::move(mv));
        }
        for (size_t mi = 0; mi < sp->interior_cache.monos.size(); ++mi)
            for (int c = 0; c < d; ++c)
                sp->dofs.push_back(
                    {DofDescriptor::Kind::Interior, 0, static_cast<int>(mi), c});
    }

    if (static_cast<int>(sp->dofs.size()) != sp->N || static_cast<int>(sp->generators.size()) != sp->N)
        throw UnisolvenceFailure("generator/DOF count mismatch");

    // L2-orthonormalize the generating set on the element before assembling
    // the moment matrix; on anisotropic elements the raw monomial generators
    // are nearly collinear and would poison the conditioning.
    const int N = sp->N;
    const auto& qp = sp->interior_cache.points;
    const auto& qw = sp->interior_cache.weights;
    std::vector<std::vector<VecD>> vals(static_cast<size_t>(N));
    for (int m = 0; m < N; ++m) {
        vals[static_cast<size_t>(m)].reserve(qp.size());
        for (const auto& x : qp) vals[static_cast<size_t>(m)].push_back(
            sp->generators[static_cast<size_t>(m)].value(x));
    }
    auto inner = [&](const std::vector<VecD>& a, const std::vector<VecD>& b) {
        double s = 0.0;
        for (size_t q = 0; q < qp.size(); ++q) s += qw[q] * dot(a[q], b[q]);
        return s;
    };
    Matrix combo(N, N); // ON generator j = sum_m combo(m,j) * raw generator m
    std::vector<std::vector<VecD>> on_vals(static_cast<size_t>(N));
    for (int j = 0; j < N; ++j) {
        std::vector<double> c(static_cast<size_t>(N), 0.0);
        c[static_cast<size_t>(j)] = 1.0;
        std::vector<VecD> cur = vals[static_cast<size_t>(j)];
        for (int pass = 0; pass < 2; ++pass) // second pass restores orthogonality
            for (int prev = 0; prev < j; ++prev) {
                const auto& pv = on_vals[static_cast<size_t>(prev)];
                double proj = inner(cur, pv);
                for (size_t q = 0; q < qp.size(); ++q) cur[q] = cur[q] - proj * pv[q];
                for (int m = 0; m <= prev; ++m) c[static_cast<size_t>(m)] -= proj * combo(m, prev);
            }
        double nrm = std::sqrt(inner(cur, cur));
        if (!(nrm > 0.0)) throw UnisolvenceFailure("dependent generating set");
        for (size_t q = 0; q < qp.size(); ++q) cur[q] = (1.0 / nrm) * cur[q];
        on_vals[static_cast<size_t>(j)] = cur;
        for (int m = 0; m < N; ++m) combo(m, j) = c[static_cast<size_t>(m)] / nrm;
    }

    Matrix M(N, N);
    for (int j = 0; j < N; ++j) {
        auto on_gen = [&](const VecD& x) {
            VecD v = VecD::zero(d);
            for (int m = 0; m <= j; ++m)
                if (combo(m, j) != 0.0)
                    v = v + combo(m, j) * sp->generators[static_cast<size_t>(m)].value(x);
            return v;
        };
        auto coeffs = sp->apply_dofs(on_gen);
        for (int i = 0; i < N; ++i) M(i, j) = coeffs[static_cast<size_t>(i)];
    }

    auto f = lu_factor(M);
    sp->moment_condition = f.singular ? std::numeric_limits<double>::infinity() : cond1(M);
    if (f.singular || sp->moment_condition > 1e12)
        throw UnisolvenceFailure("moment matrix condition " + std::to_string(sp->moment_condition));
    Matrix dual_on = lu_invert(f); // dual basis over the ON generators
    sp->dual_coeffs = Matrix(N, N);
    for (int m = 0; m < N; ++m)
        for (int j = 0; j < N; ++j) {
            double s = 0.0;
            for (int t = m; t < N; ++t) s += combo(m, t) * dual_on(t, j);
            sp->dual_coeffs(m, j) = s;
        }
    return sp;
}

} // namespace

std::vector<double> RTSpace::apply_dofs(const std::function<VecD(const VecD&)>& value) const {
    std::vector<double> out(static_cast<size_t>(N), 0.0);
    // Cache field values per face / interior point set, shared across DOFs.
    std::vector<std::vector<VecD>> fvals(face_cache.size());
    for (size_t f = 0; f < face_cache.size(); ++f) {
        fvals[f].reserve(face_cache[f].points.size());
        for (const auto& x : face_cache[f].points) fvals[f].push_back(value(x));
    }
    std::vector<VecD> ivals;
    if (!interior_cache.monos.empty()) {
        ivals.reserve(interior_cache.points.size());
        for (const auto& x : interior_cache.points) ivals.push_back(value(x));
    }
    for (size_t i = 0; i < dofs.size(); ++i) {
        const auto& d = dofs[i];
        double s = 0.0;
        if (d.kind == DofDescriptor::Kind::Face) {
            const auto& c = face_cache[static_cast<size_t>(d.face)];
            for (size_t q = 0; q < c.points.size(); ++q)
                s += c.weights[q] * dot(fvals[static_cast<size_t>(d.face)][q], c.normal) *
                     c.poly_vals[static_cast<size_t>(d.index)][q];
        } else {
            const auto& c = interior_cache;
            for (size_t q = 0; q < c.points.size(); ++q)
                s += c.weights[q] * ivals[q][d.component] *
                     c.mono_vals[static_cast<size_t>(d.index)][q];
        }
        out[i] = s;
    }
    return out;
}

VecD RTSpace::basis_value(int j, const VecD& x) const {
    VecD v = VecD::zero(dim);
    for (int m = 0; m < N; ++m) {
        double c = dual_coeffs(m, j);
        if (c != 0.0) v = v + c * generators[static_cast<size_t>(m)].value(x);
    }
    return v;
}

double RTSpace::basis_divergence(int j, const VecD& x) const {
    double v = 0.0;
    for (int m = 0; m < N; ++m) v += dual_coeffs(m, j) * generators[static_cast<size_t>(m)].divergence(x);
    return v;
}

const RTSpace& build_space(int k, int d, ReferenceId ref) {
    if (k < 0 || k > 2) throw UnsupportedDegree("RT order k = " + std::to_string(k));
    static std::mutex mu;
    static std::map<std::tuple<int, int, ReferenceId>, std::unique_ptr<RTSpace>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto key = std::make_tuple(k, d, ref);
    auto it = cache.find(key);
    if (it == cache.end()) {
        Simplex elem = reference_simplex(ref);
        it = cache.emplace(key, make_space(k, d, ref, elem, VecD::zero(d), 1.0)).first;
    }
    return *it->second;
}

VecD RTInterpolant::evaluate(const VecD& x) const {
    VecD xhat = map.affine.apply_inverse(x);
    VecD v = VecD::zero(space->dim);
    for (size_t m = 0; m < gen_coeffs.size(); ++m)
        v = v + gen_coeffs[m] * space->generators[m].value(xhat);
    return map.push(v);
}

double RTInterpolant::divergence(const VecD& x) const {
    VecD xhat = map.affine.apply_inverse(x);
    double v = 0.0;
    for (size_t m = 0; m < gen_coeffs.size(); ++m)
        v += gen_coeffs[m] * space->generators[m].divergence(xhat);
    return v / map.det_matrix;
}

RTInterpolant interpolate_reference_values(const RTSpace& space,
                                           const std::function<VecD(const VecD&)>& value) {
    RTInterpolant I;
    I.space = &space;
    I.coeffs = space.apply_dofs(value);
    I.gen_coeffs.assign(static_cast<size_t>(space.N), 0.0);
    for (int m = 0; m < space.N; ++m) {
        double s = 0.0;
        for (int j = 0; j < space.N; ++j) s += space.dual_coeffs(m, j) * I.coeffs[static_cast<size_t>(j)];
        I.gen_coeffs[static_cast<size_t>(m)] = s;
    }
    I.map = PiolaMap::identity(space.dim);
    return I;
}

RTInterpolant interpolate_reference(const RTSpace& space, const VectorField& field) {
    return interpolate_reference_values(space, field.value);
}

RTInterpolant interpolate_physical(int k, const Simplex& s, const VectorField& field) {
    CanonicalDecomposition d = canonical_decompose(s);
    const RTSpace& space = build_space(k, s.dim, d.reference_id);
    PiolaMap piola = PiolaMap::from_affine(element_map(d));
    auto pulled = [&piola, &field](const VecD& xhat) {
        return piola.pull(field.value(piola.affine.apply(xhat)));
    };
    RTInterpolant I = interpolate_reference_values(space, pulled);
    I.map = piola;
    return I;
}

DirectInterpolant interpolate_physical_direct(int k, const Simplex& s, const VectorField& field) {
    s.require_nondegenerate();
    // Moment problem assembled on the element itself: no canonical
    // decomposition, no reference pullback.
    auto sp = std::shared_ptr<RTSpace>(make_space(k, s.dim,
                                                  s.dim == 2 ? ReferenceId::Tri : ReferenceId::Tet1,
                                                  s, s.centroid(), s.diameter()));
    auto rhs = sp->apply_dofs(field.value);
    auto a = std::make_shared<std::vector<double>>(static_cast<size_t>(sp->N), 0.0);
    for (int m = 0; m < sp->N; ++m) {
        double acc = 0.0;
        for (int j = 0; j < sp->N; ++j) acc += sp->dual_coeffs(m, j) * rhs[static_cast<size_t>(j)];
        (*a)[static_cast<size_t>(m)] = acc;
    }

    DirectInterpolant out;
    out.value = [sp, a](const VecD& x) {
        VecD v = VecD::zero(sp->dim);
        for (size_t m = 0; m < a->size(); ++m) v = v + (*a)[m] * sp->generators[m].value(x);
        return v;
    };
    out.divergence = [sp, a](const VecD& x) {
        double v = 0.0;
        for (size_t m = 0; m < a->size(); ++m) v += (*a)[m] * sp->generators[m].divergence(x);
        return v;
    };
    return out;
}

} // namespace aniso_rt
