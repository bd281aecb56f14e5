#include "fpp/nu.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace fpp {

NuEstimate estimate_nu(const Vec& v, double base_side, double h, const std::vector<int>& meshes,
                       std::size_t samples_per_mesh, const CapacityLaw& law,
                       std::uint64_t seed) {
    if (samples_per_mesh == 0) throw std::invalid_argument("need at least one sample per mesh");
    if (meshes.empty()) throw std::invalid_argument("need at least one mesh");
    law.validate();
    const std::size_t d = v.size();
    NuEstimate est;
    est.v = normalized(v);
    est.base_side = base_side;
    est.h = h;
    est.meshes = meshes;

    CylinderSpec spec;
    spec.v = est.v;
    spec.h = h;
    spec.one_sided = false;
    spec.base.frame = plane_basis(est.v);
    spec.base.sides = Vec(d - 1, base_side);
    // Base [off, off + side]^{d-1} in the plane. The irrational offset keeps
    // the base edges off the lattice planes at every mesh, so a base of side
    // s contains exactly n*s lattice rows per in-plane direction.
    const double off = 0.2071067811865476;
    spec.base.center = Vec(d, 0.0);
    for (const auto& f : spec.base.frame)
        spec.base.center = add(spec.base.center, scale(f, off + base_side / 2));
    double area = spec.base.area();

    for (std::size_t mi = 0; mi < meshes.size(); ++mi) {
        int n = meshes[mi];
        double scalef = std::pow(static_cast<double>(n), static_cast<double>(d - 1)) * area;
        double sum = 0.0, sumsq = 0.0;
        std::uint64_t mesh_seed = child_seed(seed, mi);
        for (std::size_t rep = 0; rep < samples_per_mesh; ++rep) {
            CapacityField field{law, child_seed(mesh_seed, rep)};
            double x = tau(spec, n, field) / scalef;
            sum += x;
            sumsq += x * x;
        }
        double mean = sum / samples_per_mesh;
        double var = samples_per_mesh > 1
                         ? std::max(0.0, (sumsq - samples_per_mesh * mean * mean) /
                                             (samples_per_mesh - 1))
                         : 0.0;
        est.means.push_back(mean);
        est.stderrs.push_back(std::sqrt(var / samples_per_mesh));
        est.counts.push_back(samples_per_mesh);
    }
    std::size_t best = 0;
    for (std::size_t i = 1; i < meshes.size(); ++i)
        if (meshes[i] > meshes[best]) best = i;
    est.value = est.means[best];
    est.stderr_value = est.stderrs[best];
    return est;
}

double mass_at_zero(const CapacityLaw& law) {
    switch (law.kind) {
        case LawKind::Constant:
            return law.c == 0.0 ? 1.0 : 0.0;
        case LawKind::Bernoulli: {
            if (law.lo != 0.0 && law.hi != 0.0) return 0.0;
            double span = law.hi - law.lo;
            double pt = span == 0.0 ? law.p : (law.mean() - law.lo) / span;
            return law.lo == 0.0 ? 1.0 - pt : pt;
        }
        case LawKind::Exponential:
        case LawKind::Uniform:
            return 0.0;
        case LawKind::Discrete: {
            double z = 0.0, w0 = 0.0, m = 0.0;
            for (double a : law.atoms) m = std::max(m, law.theta * a);
            for (std::size_t i = 0; i < law.atoms.size(); ++i) {
                double w = law.weights[i] * std::exp(law.theta * law.atoms[i] - m);
                z += w;
                if (law.atoms[i] == 0.0) w0 += w;
            }
            return w0 / z;
        }
    }
    return 0.0;
}

bool nu_zero_check(const CapacityLaw& law, std::size_t d, double pc_override) {
    double pc;
    if (pc_override > 0)
        pc = pc_override;
    else if (d == 2)
        pc = 0.5;
    else if (d == 3)
        pc = 0.2488126;  // bond percolation threshold, standard table value
    else
        throw std::invalid_argument("p_c unknown for this dimension; pass an override");
    return mass_at_zero(law) >= 1.0 - pc;
}

const NuEstimate* NuTable::find(const Vec& v) const {
    Vec u = normalized(v);
    for (const auto& e : entries) {
        if (norm2(sub(e.v, u)) < 1e-9) return &e;
        if (norm2(add(e.v, u)) < 1e-9) return &e;
    }
    return nullptr;
}

double NuTable::nu(const Vec& v) const {
    const NuEstimate* e = find(v);
    if (!e) {
        std::ostringstream msg;
        msg << "nu table missing direction (";
        for (std::size_t i = 0; i < v.size(); ++i) msg << (i ? ", " : "") << v[i];
        msg << ")";
        throw std::runtime_error(msg.str());
    }
    return e->value;
}

std::string NuTable::to_json() const {
    nlohmann::json j;
    j["law"] = law_json.empty() ? nlohmann::json() : nlohmann::json::parse(law_json);
    j["seed"] = seed;
    j["entries"] = nlohmann::json::array();
    for (const auto& e : entries) {
        nlohmann::json je;
        je["v"] = e.v;
        je["base_side"] = e.base_side;
        je["h"] = e.h;
        je["meshes"] = e.meshes;
        je["means"] = e.means;
        je["stderrs"] = e.stderrs;
        je["counts"] = e.counts;
        je["value"] = e.value;
        je["stderr"] = e.stderr_value;
        j["entries"].push_back(std::move(je));
    }
    return j.dump(2);
}

NuTable NuTable::from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    NuTable t;
    if (!j.at("law").is_null()) t.law_json = j.at("law").dump();
    t.seed = j.at("seed").get<std::uint64_t>();
    for (const auto& je : j.at("entries")) {
        NuEstimate e;
        e.v = je.at("v").get<Vec>();
        e.base_side = je.at("base_side").get<double>();
        e.h = je.at("h").get<double>();
        e.meshes = je.at("meshes").get<std::vector<int>>();
        e.means = je.at("means").get<std::vector<double>>();
        e.stderrs = je.at("stderrs").get<std::vector<double>>();
        e.counts = je.at("counts").get<std::vector<std::size_t>>();
        e.value = je.at("value").get<double>();
        e.stderr_value = je.at("stderr").get<double>();
        t.entries.push_back(std::move(e));
    }
    return t;
}

std::string NuTable::to_csv() const {
    std::ostringstream out;
    out << "direction,mesh,mean,stderr,count\n";
    for (const auto& e : entries)
        for (std::size_t i = 0; i < e.meshes.size(); ++i) {
            out << '"';
            for (std::size_t k = 0; k < e.v.size(); ++k) out << (k ? " " : "") << e.v[k];
            out << '"' << ',' << e.meshes[i] << ',' << e.means[i] << ',' << e.stderrs[i] << ','
                << e.counts[i] << '\n';
        }
    return out.str();
}

double nu_homogeneous(const NuTable& table, const Vec& w) {
    if (table.entries.empty()) throw std::invalid_argument("empty nu table");
    double len = norm2(w);
    if (len == 0.0) return 0.0;
    return len * table.nu(scale(w, 1.0 / len));
}

TriangleCheck weak_triangle_check(const Vec& A, const Vec& B, const Vec& C,
                                  const NuTable& table) {
    if (A.size() != 2 || B.size() != 2 || C.size() != 2)
        throw std::invalid_argument("triangle check expects 2-D points");
    auto seg_normal = [](const Vec& X, const Vec& Y) {
        Vec d = sub(Y, X);
        return normalized(Vec{-d[1], d[0]});
    };
    double area2 = std::abs((B[0] - A[0]) * (C[1] - A[1]) - (B[1] - A[1]) * (C[0] - A[0]));
    if (area2 < 1e-12) throw std::invalid_argument("degenerate triangle");
    double ab = norm2(sub(B, A)), ac = norm2(sub(C, A)), bc = norm2(sub(C, B));
    auto lookup = [&](const Vec& dir) {
        const NuEstimate* e = table.find(dir);
        if (!e) table.nu(dir);  // throws with the direction named
        return *e;
    };
    const NuEstimate& eab = lookup(seg_normal(A, B));
    const NuEstimate& eac = lookup(seg_normal(A, C));
    const NuEstimate& ebc = lookup(seg_normal(B, C));
    TriangleCheck res;
    res.lhs = ab * eab.value;
    res.rhs = ac * eac.value + bc * ebc.value;
    res.se = std::sqrt(ab * ab * eab.stderr_value * eab.stderr_value +
                       ac * ac * eac.stderr_value * eac.stderr_value +
                       bc * bc * ebc.stderr_value * ebc.stderr_value);
    res.margin = res.rhs + 3 * res.se - res.lhs;
    res.pass = res.margin >= 0.0;
    return res;
}

double capacity_integral(const PolyhedralSet& P, const std::vector<ConvexPolytope>& region_add,
                         const std::vector<ConvexPolytope>& region_sub, const NuTable& table) {
    double total = 0.0;
    for (const auto& f : P.faces()) {
        double a = face_clipped_area(f, region_add, region_sub);
        if (a > 1e-12) total += table.nu(f.normal) * a;
    }
    return total;
}

namespace {

// Deterministic sample points of a flat patch: vertices, centroid, and
// pairwise vertex midpoints.
std::vector<Vec> patch_samples(const ConvexPolytope& patch) {
    std::vector<Vec> pts = patch.vertices();
    if (pts.empty()) return pts;
    Vec cen(patch.dim(), 0.0);
    for (const auto& v : pts) cen = add(cen, v);
    cen = scale(cen, 1.0 / pts.size());
    std::size_t nv = pts.size();
    for (std::size_t i = 0; i < nv; ++i) {
        for (std::size_t j = i + 1; j < nv; ++j)
            pts.push_back(scale(add(pts[i], pts[j]), 0.5));
        pts.push_back(scale(add(pts[i], cen), 0.5));
    }
    pts.push_back(cen);
    return pts;
}

}  // namespace

PhiTildeResult phi_tilde(const ContinuousDomain& dom, const std::vector<PolyhedralSet>& family,
                         const NuTable& table) {
    PhiTildeResult res;
    bool found = false;
    for (const auto& P : family) {
        CutCandidate cand;
        cand.P = P;
        auto tv = transverse(P, dom.body);
        cand.transverse_ok = tv.ok;
        if (!tv.ok) cand.witness = tv.witness;
        cand.source_inside = true;
        for (const auto& patch : dom.source)
            for (const auto& x : patch_samples(patch))
                if (!P.strictly_contains(x)) {
                    cand.source_inside = false;
                    cand.witness = x;
                }
        cand.sink_outside = true;
        for (const auto& patch : dom.sink)
            for (const auto& x : patch_samples(patch))
                if (P.contains(x, 1e-9)) {
                    cand.sink_outside = false;
                    cand.witness = x;
                }
        if (cand.admissible()) {
            cand.capacity = capacity_integral(P, dom.body.parts(), {}, table);
            if (!found || cand.capacity < res.value) {
                found = true;
                res.value = cand.capacity;
                res.argmin = res.candidates.size();
            }
        }
        res.candidates.push_back(std::move(cand));
    }
    if (!found) throw std::runtime_error("no admissible candidate in the family");
    return res;
}

}  // namespace fpp
