#include "ofbm/symmetry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ofbm/rng.hpp"

namespace ofbm::symmetry {

using commutant::centralizer_structure;
using commutant::commutant_skew_basis;
using commutant::OrthogonalCentralizer;
using matfun::mat_power;
using matfun::spectral_norm;

std::string to_string(GroupType t) {
    switch (t) {
        case GroupType::Minimal: return "Minimal";
        case GroupType::Trivial: return "Trivial";
        case GroupType::Rotational: return "Rotational";
        case GroupType::Maximal: return "Maximal";
        case GroupType::T3a: return "T3a";
        case GroupType::T3b: return "T3b";
        case GroupType::T3c: return "T3c";
        case GroupType::T3d: return "T3d";
        case GroupType::T3e: return "T3e";
        case GroupType::T3f: return "T3f";
        case GroupType::General: return "General";
    }
    return "General";
}

namespace {

std::vector<double> default_samples() {
    std::vector<double> xs;
    for (double l : {-1.0, -0.5, -0.2, -0.1, 0.1, 0.2, 0.5, 1.0}) xs.push_back(std::exp(l));
    return xs;
}

RealMatrix rotation2(double theta) {
    return RealMatrix{{std::cos(theta), -std::sin(theta)},
                      {std::sin(theta), std::cos(theta)}};
}

// Rotation by pi about the axis q (unit vector): 2qq^T - I.
RealMatrix rot_pi(const RealMatrix& q) {
    const int n = q.rows();
    RealMatrix r = 2.0 * (q * q.transpose());
    return r - RealMatrix::identity(n);
}

// Reflection in the plane orthogonal to p: I - 2pp^T.
RealMatrix ref0(const RealMatrix& p) {
    const int n = p.rows();
    return RealMatrix::identity(n) - 2.0 * (p * p.transpose());
}

RealMatrix cross3(const RealMatrix& a, const RealMatrix& b) {
    RealMatrix c(3, 1);
    c(0, 0) = a(1, 0) * b(2, 0) - a(2, 0) * b(1, 0);
    c(1, 0) = a(2, 0) * b(0, 0) - a(0, 0) * b(2, 0);
    c(2, 0) = a(0, 0) * b(1, 0) - a(1, 0) * b(0, 0);
    return c;
}

RealMatrix unit(RealMatrix v) {
    const double n = frobenius_norm(v);
    if (n < 1e-300) throw numeric_error("unit: zero vector");
    return (1.0 / n) * v;
}

// Deterministic sign convention: largest-magnitude component positive.
RealMatrix canonical_axis(RealMatrix v) {
    int arg = 0;
    for (int i = 1; i < v.rows(); ++i)
        if (std::abs(v(i, 0)) > std::abs(v(arg, 0))) arg = i;
    if (v(arg, 0) < 0.0) v *= -1.0;
    return v;
}

// Frobenius-normalized rotation generator about the third frame column.
RealMatrix plane_rotation_generator(const RealMatrix& u, const RealMatrix& v) {
    RealMatrix g = u * v.transpose() - v * u.transpose();
    return (1.0 / frobenius_norm(g)) * g;
}

struct Verifier {
    const params::SpectralParams& p;
    const params::DerivedParams& d;
    std::vector<double> samples;  // owned: may come from a temporary default set
    double tol;

    bool operator()(const RealMatrix& o_side) const {
        RealMatrix c = d.w * o_side * d.w_inv;
        return is_symmetry_element(c, p, d, tol, samples);
    }
};

bool is_scalar_multiple_of_identity(const RealMatrix& b, double tol) {
    const int n = b.rows();
    RealMatrix dev = b - (b.trace() / n) * RealMatrix::identity(n);
    return frobenius_norm(dev) <= tol * std::max(1.0, frobenius_norm(b));
}

// ---- n = 2 ------------------------------------------------------------

SymmetryClassification classify2_impl(const params::SpectralParams& p,
                                      const params::DerivedParams& d,
                                      const params::PiFamily& fam,
                                      const ToleranceConfig& tol) {
    SymmetryClassification out;
    out.n = 2;
    out.conjugacy_w = d.w;
    out.diagnostics = fam.warnings;
    const RealMatrix id = RealMatrix::identity(2);
    Verifier verify{p, d, fam.sample_points.empty() ? default_samples() : fam.sample_points,
                    tol.eps_element};

    const bool pi_I_zero = frobenius_norm(fam.pi_I) <= tol.eps_sym;
    bool all_scalar = true;
    for (const auto& b : fam.span_basis)
        if (!is_scalar_multiple_of_identity(b, 1e-9)) all_scalar = false;

    RealMatrix frame = id;
    bool have_frame = false;
    if (!all_scalar) {
        // eigenbasis of the most separated sampled Pi_x
        double best_gap = -1.0;
        for (const auto& px : fam.pi_x_values) {
            OrthogonalCentralizer c = centralizer_structure(px, tol);
            if (c.ambiguous_clustering)
                out.diagnostics.insert(out.diagnostics.end(), c.warnings.begin(),
                                       c.warnings.end());
            if (c.partition.size() == 2) {
                const double gap = std::abs(c.cluster_values[0] - c.cluster_values[1]);
                if (gap > best_gap) {
                    best_gap = gap;
                    frame = c.eigenbasis;
                    have_frame = true;
                }
            }
        }
        if (!have_frame) {
            out.diagnostics.push_back(
                "span is non-scalar but every sampled Pi_x clusters as scalar");
            all_scalar = true;
        }
    }

    auto emit_minimal = [&]() {
        out.group_type = GroupType::Minimal;
        out.lie_dimension = 0;
        out.finite_elements = {id, -1.0 * id};
    };

    if (all_scalar) {
        if (pi_I_zero) {
            // candidate maximal: verify rotations and a reflection
            const RealMatrix refl = RealMatrix::diag({1.0, -1.0});
            const bool rot_ok = verify(rotation2(0.7)) && verify(rotation2(2.1));
            const bool ref_ok = verify(refl);
            if (rot_ok && ref_ok) {
                out.group_type = GroupType::Maximal;
                out.lie_dimension = 1;
                out.tangent_generators = {plane_rotation_generator(id.col(0), id.col(1))};
                out.finite_elements = {id, -1.0 * id, refl, rotation2(M_PI / 2.0)};
            } else if (rot_ok) {
                out.diagnostics.push_back("reflection failed verification; downgraded");
                out.group_type = GroupType::Rotational;
                out.lie_dimension = 1;
                out.tangent_generators = {plane_rotation_generator(id.col(0), id.col(1))};
                out.finite_elements = {id, -1.0 * id, rotation2(M_PI / 2.0)};
            } else {
                out.diagnostics.push_back("rotation failed verification; downgraded");
                emit_minimal();
            }
        } else {
            if (verify(rotation2(0.7)) && verify(rotation2(2.1))) {
                out.group_type = GroupType::Rotational;
                out.lie_dimension = 1;
                out.tangent_generators = {plane_rotation_generator(id.col(0), id.col(1))};
                out.finite_elements = {id, -1.0 * id, rotation2(M_PI / 2.0)};
            } else {
                out.diagnostics.push_back("rotation failed verification; downgraded");
                emit_minimal();
            }
        }
        return out;
    }

    // some Pi_x is non-scalar with eigenframe `frame`
    bool all_diagonal = true;
    for (const auto& b : fam.span_basis) {
        RealMatrix t = frame.transpose() * b * frame;
        if (std::abs(t(0, 1)) > 1e-8 || std::abs(t(1, 0)) > 1e-8) all_diagonal = false;
    }

    if (all_diagonal && pi_I_zero) {
        RealMatrix r1 = frame * RealMatrix::diag({1.0, -1.0}) * frame.transpose();
        RealMatrix r2 = frame * RealMatrix::diag({-1.0, 1.0}) * frame.transpose();
        if (verify(r1) && verify(r2)) {
            out.group_type = GroupType::Trivial;
            out.lie_dimension = 0;
            out.finite_elements = {id, -1.0 * id, r1, r2};
            out.axes = {canonical_axis(frame.col(0)), canonical_axis(frame.col(1))};
        } else {
            out.diagnostics.push_back("reflection failed verification; downgraded");
            emit_minimal();
        }
    } else {
        emit_minimal();
    }
    return out;
}

// ---- n = 3 ------------------------------------------------------------

// Orthonormal completion (u, v) of a unit axis p, deterministic in p.
void complete_axis(const RealMatrix& p, RealMatrix& u, RealMatrix& v) {
    RealMatrix e(3, 1);
    int least = 0;
    for (int i = 1; i < 3; ++i)
        if (std::abs(p(i, 0)) < std::abs(p(least, 0))) least = i;
    e(least, 0) = 1.0;
    u = unit(cross3(p, e));
    v = cross3(p, u);
}

struct FramePool {
    std::vector<RealMatrix> frames;

    void add(const RealMatrix& q) {
        // canonicalize columns (sign + order) before deduplication
        RealMatrix c = q;
        for (int j = 0; j < 3; ++j) {
            RealMatrix col = canonical_axis(c.col(j));
            c.set_col(j, col);
        }
        // sort columns lexicographically for a stable key
        std::vector<int> idx{0, 1, 2};
        std::sort(idx.begin(), idx.end(), [&](int a, int b) {
            for (int i = 0; i < 3; ++i) {
                if (std::abs(c(i, a) - c(i, b)) > 1e-9) return c(i, a) < c(i, b);
            }
            return false;
        });
        RealMatrix sorted(3, 3);
        for (int j = 0; j < 3; ++j) sorted.set_col(j, c.col(idx[j]));
        for (const auto& f : frames)
            if (frobenius_norm(f - sorted) < 1e-7) return;
        frames.push_back(sorted);
    }
};

SymmetryClassification classify3_impl(const params::SpectralParams& p,
                                      const params::DerivedParams& d,
                                      const params::PiFamily& fam,
                                      const ToleranceConfig& tol) {
    SymmetryClassification out;
    out.n = 3;
    out.conjugacy_w = d.w;
    out.diagnostics = fam.warnings;
    const RealMatrix id = RealMatrix::identity(3);
    Verifier verify{p, d, fam.sample_points.empty() ? default_samples() : fam.sample_points,
                    tol.eps_element};

    const bool pi_I_zero = frobenius_norm(fam.pi_I) <= tol.eps_sym;

    std::vector<RealMatrix> family = fam.span_basis;
    family.push_back(fam.pi_I);
    const int lie_dim = commutant_skew_basis(family, tol).dimension();
    out.lie_dimension = lie_dim;

    auto zero_axis_of_pi_I = [&]() -> RealMatrix {
        commutant::SkewCentralizer sc = commutant::skew_centralizer_structure(fam.pi_I, tol);
        if (sc.zero_block_size != 1)
            throw numeric_error("classify3: nonzero Pi_I in so(3) must have a 1-dim kernel");
        return canonical_axis(unit(sc.zero_block_axes()));
    };

    if (lie_dim >= 3) {
        if (pi_I_zero) {
            out.group_type = GroupType::T3e;
            for (const auto& g : commutant_skew_basis({id}, tol).elements)
                out.tangent_generators.push_back(g);
            out.finite_elements = {id, -1.0 * id, ref0(id.col(2)), rot_pi(id.col(0))};
            // full orthogonal group: spot-verify representatives
            for (const auto& e : out.finite_elements)
                if (!verify(e))
                    out.diagnostics.push_back("maximal-type representative failed verification");
        } else {
            // unreachable when Pi_I participates in the commutant family; kept
            // as a guard for near-zero Pi_I straddling the threshold
            RealMatrix axis = zero_axis_of_pi_I();
            out.group_type = GroupType::T3f;
            out.axes = {axis};
            RealMatrix u, v;
            complete_axis(axis, u, v);
            out.tangent_generators = {plane_rotation_generator(u, v)};
            out.finite_elements = {id, -1.0 * id, ref0(axis), rot_pi(axis)};
        }
        return out;
    }

    if (lie_dim == 2) {
        out.diagnostics.push_back(
            "tangent dimension 2 is not realizable for closed subgroups of O(3); "
            "treating as dimension 1");
    }

    if (lie_dim == 1 || lie_dim == 2) {
        // axis = kernel of the single so(3) generator
        commutant::SkewBasis basis = commutant_skew_basis(family, tol);
        RealMatrix gen = basis.elements.front();
        RealMatrix axis(3, 1);
        axis(0, 0) = gen(2, 1);
        axis(1, 0) = gen(0, 2);
        axis(2, 0) = gen(1, 0);
        axis = canonical_axis(unit(axis));
        RealMatrix u, v;
        complete_axis(axis, u, v);

        // probe perpendicular half-turns to separate the two axial types
        Rng rng(777);
        int pass = 0, fail = 0;
        for (int k = 0; k < 3; ++k) {
            const double phi = 2.0 * M_PI * rng.uniform();
            RealMatrix q0 = std::cos(phi) * u + std::sin(phi) * v;
            if (verify(rot_pi(q0))) ++pass;
            else ++fail;
        }
        out.axes = {axis};
        out.tangent_generators = {plane_rotation_generator(u, v)};
        if (pass == 3) {
            out.group_type = GroupType::T3d;
            out.finite_elements = {id, -1.0 * id, ref0(axis), rot_pi(axis), rot_pi(u), ref0(u)};
        } else {
            if (fail != 3)
                out.diagnostics.push_back(
                    "perpendicular half-turn probes disagreed; conservative axial type");
            out.group_type = GroupType::T3f;
            out.finite_elements = {id, -1.0 * id, ref0(axis), rot_pi(axis)};
        }
        // drop any representative that fails the defining relation
        std::vector<RealMatrix> kept;
        for (const auto& e : out.finite_elements)
            if (verify(e)) kept.push_back(e);
            else out.diagnostics.push_back("axial-type representative failed verification");
        out.finite_elements = kept;
        return out;
    }

    // ---- finite group: build candidate frames and verify sign matrices ----
    FramePool pool;
    std::vector<RealMatrix> axes_pool;
    for (const auto& px : fam.pi_x_values) {
        OrthogonalCentralizer c = centralizer_structure(px, tol);
        if (c.ambiguous_clustering)
            out.diagnostics.insert(out.diagnostics.end(), c.warnings.begin(), c.warnings.end());
        if (c.partition.size() == 3) {
            pool.add(c.eigenbasis);
        } else if (c.partition.size() == 2) {
            // the simple eigenvalue's eigenvector is the rotation axis
            const int col = c.partition[0] == 1 ? 0 : c.partition[0];
            axes_pool.push_back(canonical_axis(c.eigenbasis.col(col)));
        }
    }
    if (!pi_I_zero) {
        commutant::SkewCentralizer sc = commutant::skew_centralizer_structure(fam.pi_I, tol);
        if (sc.zero_block_size == 1) axes_pool.push_back(canonical_axis(sc.zero_block_axes()));
    }
    // shared-axis constructions from pairs of distinct axes
    for (size_t i = 0; i < axes_pool.size(); ++i) {
        for (size_t j = i + 1; j < axes_pool.size(); ++j) {
            const RealMatrix& a = axes_pool[i];
            const RealMatrix& b = axes_pool[j];
            const double c = std::abs(frobenius_inner(a, b));
            if (c > 1.0 - 1e-10) continue;  // same axis
            RealMatrix q = unit(cross3(a, b));
            if (c < 1e-10) {
                RealMatrix f(3, 3);
                f.set_col(0, q);
                f.set_col(1, a);
                f.set_col(2, b);
                pool.add(f);
            } else {
                // projection of one axis onto the plane orthogonal to the other
                RealMatrix va = unit(b - frobenius_inner(b, a) * a);
                RealMatrix fa(3, 3);
                fa.set_col(0, q);
                fa.set_col(1, va);
                fa.set_col(2, a);
                pool.add(fa);
                RealMatrix vb = unit(a - frobenius_inner(a, b) * b);
                RealMatrix fb(3, 3);
                fb.set_col(0, q);
                fb.set_col(1, vb);
                fb.set_col(2, b);
                pool.add(fb);
            }
        }
    }

    int best_count = 0;
    RealMatrix best_frame;
    std::vector<int> best_masks;
    for (const auto& f : pool.frames) {
        std::vector<int> masks;
        for (int mask = 0; mask < 8; ++mask) {
            RealMatrix s = RealMatrix::zero(3, 3);
            for (int i = 0; i < 3; ++i) s(i, i) = (mask >> i) & 1 ? -1.0 : 1.0;
            if (verify(f * s * f.transpose())) masks.push_back(mask);
        }
        if (static_cast<int>(masks.size()) > best_count) {
            best_count = static_cast<int>(masks.size());
            best_frame = f;
            best_masks = masks;
        }
    }

    auto emit_elements = [&](const RealMatrix& f, const std::vector<int>& masks) {
        for (int mask : masks) {
            RealMatrix s = RealMatrix::zero(3, 3);
            for (int i = 0; i < 3; ++i) s(i, i) = (mask >> i) & 1 ? -1.0 : 1.0;
            out.finite_elements.push_back(f * s * f.transpose());
        }
    };

    if (best_count >= 8) {
        out.group_type = GroupType::T3c;
        emit_elements(best_frame, best_masks);
        for (int j = 0; j < 3; ++j) out.axes.push_back(canonical_axis(best_frame.col(j)));
    } else if (best_count == 4) {
        // expected pattern {identity, -identity, single -1 at j, single +1 at j}
        int axis_col = -1;
        for (int j = 0; j < 3 && axis_col < 0; ++j) {
            std::vector<int> expect{0, 7, 7 ^ (1 << j), 1 << j};
            std::sort(expect.begin(), expect.end());
            std::vector<int> got = best_masks;
            std::sort(got.begin(), got.end());
            if (expect == got) axis_col = j;
        }
        if (axis_col >= 0) {
            out.group_type = GroupType::T3b;
            emit_elements(best_frame, best_masks);
            out.axes = {canonical_axis(best_frame.col(axis_col))};
        } else {
            out.diagnostics.push_back(
                "four surviving sign elements do not form an axial subgroup");
            out.group_type = GroupType::T3a;
            out.finite_elements = {id, -1.0 * id};
        }
    } else {
        out.group_type = GroupType::T3a;
        out.finite_elements = {id, -1.0 * id};
    }
    return out;
}

// Re-run the classification under merge/split clustering hypotheses whenever a
// near-degenerate spectrum was flagged; group type is discontinuous in the
// parameters, so a one-sided answer would overstate certainty.
template <typename Impl>
SymmetryClassification with_dual_report(Impl impl, const params::SpectralParams& p,
                                        const params::DerivedParams& d,
                                        const params::PiFamily& fam) {
    SymmetryClassification primary = impl(p, d, fam, p.tolerances);
    bool ambiguous = false;
    for (const auto& diag : primary.diagnostics)
        if (diag.find("clustering gap") != std::string::npos) ambiguous = true;
    if (!ambiguous) return primary;

    ToleranceConfig merge = p.tolerances;
    merge.cluster_gap *= 4.0;
    ToleranceConfig split = p.tolerances;
    split.cluster_gap /= 4.0;
    SymmetryClassification merged = impl(p, d, fam, merge);
    SymmetryClassification splitted = impl(p, d, fam, split);
    if (merged.group_type != splitted.group_type)
        primary.diagnostics.push_back("dual report: type under merged clustering " +
                                      to_string(merged.group_type) +
                                      ", under split clustering " +
                                      to_string(splitted.group_type));
    return primary;
}

}  // namespace

bool is_symmetry_element(const RealMatrix& c, const params::SpectralParams& p,
                         const params::DerivedParams& d, double tol,
                         const std::vector<double>& samples) {
    if (c.rows() != p.n || c.cols() != p.n)
        throw shape_error("is_symmetry_element: candidate shape mismatch");
    std::vector<double> xs = samples.empty() ? default_samples() : samples;
    xs.push_back(1.0);
    const RealMatrix ct = c.transpose();
    for (double x : xs) {
        RealMatrix b = mat_power(-1.0 * p.d_exponent, x);
        RealMatrix rx = b * d.re_aa * b.transpose();
        RealMatrix ix = b * d.im_aa * b.transpose();
        RealMatrix dr = rx - c * rx * ct;
        RealMatrix di = ix - c * ix * ct;
        const double lhs = std::sqrt(frobenius_norm(dr) * frobenius_norm(dr) +
                                     frobenius_norm(di) * frobenius_norm(di));
        const double scale = std::sqrt(frobenius_norm(rx) * frobenius_norm(rx) +
                                       frobenius_norm(ix) * frobenius_norm(ix));
        if (lhs > tol * scale) return false;
    }
    return true;
}

MaximalTestResult maximal_test(const params::SpectralParams& p,
                               const params::DerivedParams& d, double tol) {
    MaximalTestResult out;
    out.im_norm = spectral_norm(d.im_aa);
    const RealMatrix& re = d.re_aa;
    const RealMatrix& dd = p.d_exponent;

    // least-squares scalar in  D Re + Re D^T = 2 d Re
    RealMatrix lhs = dd * re + re * dd.transpose();
    const double dval = frobenius_inner(lhs, re) / (2.0 * frobenius_inner(re, re));
    out.d_value = dval;
    out.equation_residual = spectral_norm(lhs - 2.0 * dval * re);

    const bool im_ok = out.im_norm <= tol * (1.0 + spectral_norm(re));
    const bool eq_ok = out.equation_residual <=
                       tol * spectral_norm(re) * (1.0 + spectral_norm(dd));
    out.is_maximal = im_ok && eq_ok;
    if (!out.is_maximal) out.d_value.reset();
    return out;
}

MinimalTestResult minimal_test(const params::DerivedParams& d, const ToleranceConfig& tol) {
    MinimalTestResult out;
    RealMatrix s = symmetric_part(d.m);
    RealMatrix l = skew_part(d.m);
    matfun::SymEig e = matfun::sym_eig(s, tol);

    const int n = s.rows();
    double gap = std::numeric_limits<double>::infinity();
    for (int i = 1; i < n; ++i) gap = std::min(gap, e.eigenvalues[i - 1] - e.eigenvalues[i]);
    out.s_gap = gap;
    const double scale =
        std::max(std::abs(e.eigenvalues.front()), std::abs(e.eigenvalues.back()));
    const double delta = tol.cluster_gap * std::max(1.0, scale);
    const bool distinct = gap > delta;

    out.l_block_connected = !commutant::in_L_invar(l, e.eigenvectors, tol);
    out.in_M = distinct && out.l_block_connected;
    return out;
}

SymmetryClassification classify2(const params::SpectralParams& p,
                                 const params::DerivedParams& d,
                                 const params::PiFamily& fam) {
    if (p.n != 2) throw domain_error("classify2: n must be 2");
    return with_dual_report(classify2_impl, p, d, fam);
}

SymmetryClassification classify3(const params::SpectralParams& p,
                                 const params::DerivedParams& d,
                                 const params::PiFamily& fam) {
    if (p.n != 3) throw domain_error("classify3: n must be 3");
    return with_dual_report(classify3_impl, p, d, fam);
}

SymmetryClassification classify_general(const params::SpectralParams& p,
                                        const params::DerivedParams& d,
                                        const params::PiFamily& fam) {
    if (p.n == 2) return classify2(p, d, fam);
    if (p.n == 3) return classify3(p, d, fam);

    SymmetryClassification out;
    out.n = p.n;
    out.conjugacy_w = d.w;
    out.diagnostics = fam.warnings;
    const RealMatrix id = RealMatrix::identity(p.n);
    Verifier verify{p, d, fam.sample_points.empty() ? default_samples() : fam.sample_points,
                    p.tolerances.eps_element};

    std::vector<RealMatrix> family = fam.span_basis;
    family.push_back(fam.pi_I);
    commutant::SkewBasis basis = commutant_skew_basis(family, p.tolerances);
    out.lie_dimension = basis.dimension();
    out.tangent_generators = basis.elements;
    out.group_type = GroupType::General;

    out.finite_elements = {id, -1.0 * id};
    auto known = [&](const RealMatrix& e) {
        for (const auto& f : out.finite_elements)
            if (frobenius_norm(e - f) < 1e-8) return true;
        return false;
    };
    if (p.n <= 12) {
        for (const auto& px : fam.pi_x_values) {
            OrthogonalCentralizer c = centralizer_structure(px, p.tolerances);
            bool simple = true;
            for (int k : c.partition)
                if (k != 1) simple = false;
            if (!simple) continue;
            for (const auto& e : commutant::sign_elements(c))
                if (!known(e) && verify(e)) out.finite_elements.push_back(e);
        }
    }
    return out;
}

}  // namespace ofbm::symmetry
