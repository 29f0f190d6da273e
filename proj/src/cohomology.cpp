#include "roelab/cohomology.hpp"

#include <algorithm>
#include <sstream>

namespace roelab {

void WindowSchedule::validate(int k, int degree_cap) const {
    if (steps.empty()) throw Error("empty window schedule");
    if (margin < 1) throw Error("margin must be positive");
    if ((int)steps.size() <= margin)
        throw Error("schedule needs at least margin+1 steps");
    for (std::size_t j = 0; j + 1 < steps.size(); ++j)
        if (steps[j + 1].first <= steps[j].first) throw Error("schedule cores must increase");
    int need = k * (degree_cap + 2);
    for (auto& [core, pad] : steps)
        if (pad < need) {
            std::ostringstream os;
            os << "padding " << pad << " violates the protocol: need at least k*(degree_cap+2) = "
               << need << " at scale " << k;
            throw Error(os.str());
        }
}

WindowSchedule WindowSchedule::standard(int core_max, int num_steps, int k_max, int degree_cap,
                                        int margin) {
    if (num_steps < margin + 1) num_steps = margin + 1;
    WindowSchedule s;
    s.margin = margin;
    int pad = k_max * (degree_cap + 2);
    for (int i = num_steps - 1; i >= 0; --i) {
        int core = core_max - i * std::max(1, core_max / num_steps);
        if (core < 1) core = 1;
        if (!s.steps.empty() && core <= s.steps.back().first) core = s.steps.back().first + 1;
        s.steps.push_back({core, pad});
    }
    return s;
}

std::vector<int> radius_region(const Window& w, int r) {
    std::vector<int> out;
    int nc = w.spec.num_components();
    std::vector<Coord> origins(nc);
    for (int c = 0; c < nc; ++c) origins[c] = w.spec.component_origin(c);
    for (int i = 0; i < w.n(); ++i) {
        auto d = w.spec.distance(origins[w.component[i]], w.pts[i]);
        if (d && *d <= r) out.push_back(i);
    }
    return out;
}

SparseMat<BigInt> integer_kernel(const SparseMat<BigInt>& M) {
    try {
        auto red = reduce_columns(M.cast<CheckedI64>(), true);
        return kernel_basis(red).cast<BigInt>();
    } catch (const OverflowEscalation&) {
        auto red = reduce_columns(M.cast<BigInt>(), true);
        return kernel_basis(red);
    }
}

TowerEntry windowed_entry(const Window& w, int k, int degree, int core_radius,
                          int margin_core_radius, const WindowedOptions& opt) {
    if (margin_core_radius < core_radius) throw Error("margin core must contain the entry core");
    TowerEntry e = windowed_entry_in(w, k, degree, radius_region(w, core_radius),
                                     radius_region(w, margin_core_radius), w.all_indices(), opt);
    e.core_radius = core_radius;
    e.margin_core_radius = margin_core_radius;
    return e;
}

namespace {

std::vector<int> intersect_sorted(const std::vector<int>& a, const std::vector<int>& b) {
    std::vector<int> out;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

} // namespace

TowerEntry windowed_entry_in(const Window& w, int k, int degree, std::vector<int> support,
                             std::vector<int> margin_support, const std::vector<int>& subspace,
                             const WindowedOptions& opt) {
    std::sort(support.begin(), support.end());
    std::sort(margin_support.begin(), margin_support.end());
    std::vector<int> sub = subspace;
    std::sort(sub.begin(), sub.end());
    support = intersect_sorted(support, sub);
    margin_support = intersect_sorted(margin_support, sub);
    for (int v : support)
        if (!std::binary_search(margin_support.begin(), margin_support.end(), v))
            throw Error("margin support must contain the entry support");

    const auto& region = support;
    auto bn = std::make_shared<CochainBasis>(
        enumerate_controlled_simplices(w, k, degree, region, opt.backend, opt.enumeration));
    auto bn1 = enumerate_controlled_simplices(
        w, k, degree + 1, intersect_sorted(thicken_region(w, region, k), sub), opt.backend,
        opt.enumeration);
    SparseMat<BigInt> d_out = coboundary_matrix_rows(*bn, bn1);

    SparseMat<BigInt> b_gens(bn->size(), 0);
    if (degree > 0) {
        const auto& region_big = margin_support;
        auto b_prev = enumerate_controlled_simplices(w, k, degree - 1, region_big, opt.backend,
                                                     opt.enumeration);
        auto bn_big = enumerate_controlled_simplices(
            w, k, degree, intersect_sorted(thicken_region(w, region_big, k), sub), opt.backend,
            opt.enumeration);
        SparseMat<BigInt> d1 = coboundary_matrix_rows(b_prev, bn_big);

        // split rows of d1 into those inside C^n(core) and the rest
        std::vector<int> inside_row(bn_big.size(), -1);
        std::vector<int> outside_row(bn_big.size(), -1);
        int n_out = 0;
        for (int r = 0; r < bn_big.size(); ++r) {
            int idx = bn->find(bn_big.simplices[r]);
            if (idx >= 0) inside_row[r] = idx;
            else outside_row[r] = n_out++;
        }
        SparseMat<BigInt> d1_out(n_out, d1.ncols), d1_in(bn->size(), d1.ncols);
        for (int c = 0; c < d1.ncols; ++c)
            for (auto& [r, v] : d1.cols[c].e) {
                if (inside_row[r] >= 0) d1_in.cols[c].e.push_back({inside_row[r], v});
                else d1_out.cols[c].e.push_back({outside_row[r], v});
            }
        for (int c = 0; c < d1.ncols; ++c) {
            auto srt = [](auto& col) {
                std::sort(col.e.begin(), col.e.end(),
                          [](const auto& a, const auto& b) { return a.first < b.first; });
            };
            srt(d1_in.cols[c]);
            srt(d1_out.cols[c]);
        }
        SparseMat<BigInt> K1 = integer_kernel(d1_out);
        b_gens = mat_mul(d1_in, K1);
    }

    TowerEntry entry;
    entry.H = std::make_shared<Cohomology>(b_gens, d_out);
    entry.group = entry.H->group();
    entry.basis = bn;
    return entry;
}

namespace {

// structure map src -> dst given a cochain-level matrix (dst basis x src basis)
GroupHom induced_hom(const TowerEntry& src, const TowerEntry& dst, const SparseMat<BigInt>& cochain_map,
                     bool& verified) {
    GroupHom h;
    h.src = src.group;
    h.dst = dst.group;
    int ngen_dst = dst.group.rank + (int)dst.group.torsion.size();
    int ngen_src = src.group.rank + (int)src.group.torsion.size();
    h.m.assign(ngen_dst, std::vector<BigInt>(ngen_src, BigInt(0)));
    verified = true;
    for (int j = 0; j < ngen_src; ++j) {
        SparseVec<BigInt> image = mat_vec(cochain_map, src.H->representatives()[j]);
        auto coords = dst.H->class_coordinates(image);
        for (int i = 0; i < ngen_dst; ++i) h.m[i][j] = coords[i];
        // homomorphism check on torsion generators: order must be respected
        if (j < (int)src.group.torsion.size()) {
            SparseVec<BigInt> scaled;
            axpy(scaled, src.group.torsion[j], image);
            if (!dst.H->is_zero_class(scaled)) verified = false;
        }
    }
    return h;
}

void finalize_tower(Tower& t) {
    t.stabilized = false;
    t.stable_index = -1;
    if (t.entries.size() < 2) return;
    std::vector<bool> iso(t.maps.size());
    for (std::size_t i = 0; i < t.maps.size(); ++i) iso[i] = hom_is_isomorphism(t.maps[i]);
    t.stabilized = iso.back();
    for (int i = (int)iso.size() - 1; i >= 0 && iso[i]; --i) t.stable_index = i;
}

} // namespace

Tower windowed_cohomology(const AmbientSpec& spec, int k, int degree,
                          const WindowSchedule& schedule, const WindowedOptions& opt) {
    schedule.validate(k, opt.enumeration.degree_cap);
    if (degree + 1 > opt.enumeration.degree_cap)
        throw Error("degree cap too small for the requested degree");

    auto [core_max, pad_max] = schedule.steps.back();
    Tower t;
    t.window = std::make_shared<Window>(make_window(spec, core_max, pad_max));
    const Window& w = *t.window;
    t.direction = Tower::Direction::colimit_window;
    int entries = (int)schedule.steps.size() - schedule.margin;
    for (int j = 0; j < entries; ++j) {
        int core = schedule.steps[j].first;
        int margin_core = schedule.steps[j + schedule.margin].first;
        t.entries.push_back(windowed_entry(w, k, degree, core, margin_core, opt));
        t.index.push_back(core);
    }
    t.maps_verified = true;
    for (int j = 0; j + 1 < entries; ++j) {
        SparseMat<BigInt> inc =
            basis_inclusion_matrix(*t.entries[j].basis, *t.entries[j + 1].basis);
        bool ok = true;
        t.maps.push_back(induced_hom(t.entries[j], t.entries[j + 1], inc, ok));
        t.maps_verified = t.maps_verified && ok;
    }
    finalize_tower(t);
    return t;
}

Tower scale_tower(const AmbientSpec& spec, int degree, const std::vector<int>& scales,
                  const WindowSchedule& schedule, const WindowedOptions& opt) {
    if (scales.empty()) throw Error("scale_tower: empty scale range");
    for (std::size_t i = 0; i + 1 < scales.size(); ++i)
        if (scales[i + 1] <= scales[i]) throw Error("scales must increase");

    auto [core_max, pad_max] = schedule.steps.back();
    int entries = (int)schedule.steps.size() - schedule.margin;
    int jstar = entries - 1;
    int core = schedule.steps[jstar].first;
    int margin_core = schedule.steps[jstar + schedule.margin].first;

    Tower t;
    t.window = std::make_shared<Window>(make_window(spec, core_max, pad_max));
    const Window& w = *t.window;
    t.direction = Tower::Direction::limit_scale;
    for (int k : scales) {
        // the window tower at this scale must already be stabilized
        Tower wt = windowed_cohomology(spec, k, degree, schedule, opt);
        if (!wt.stabilized)
            throw Error("unstabilized input tower at scale " + std::to_string(k));
        t.entries.push_back(windowed_entry(w, k, degree, core, margin_core, opt));
        t.index.push_back(k);
    }
    t.maps_verified = true;
    for (std::size_t i = 0; i + 1 < scales.size(); ++i) {
        SparseMat<BigInt> restr =
            scale_restriction_matrix(*t.entries[i].basis, *t.entries[i + 1].basis);
        bool ok = true;
        t.maps.push_back(induced_hom(t.entries[i + 1], t.entries[i], restr, ok));
        t.maps_verified = t.maps_verified && ok;
    }
    // associativity of the structure maps on representatives
    for (std::size_t i = 0; i + 2 < scales.size(); ++i) {
        SparseMat<BigInt> restr =
            scale_restriction_matrix(*t.entries[i].basis, *t.entries[i + 2].basis);
        bool ok = true;
        GroupHom direct = induced_hom(t.entries[i + 2], t.entries[i], restr, ok);
        DenseMat composed = dense_mul(t.maps[i].m, t.maps[i + 1].m);
        // compare modulo the target's torsion
        int nd = t.entries[i].group.rank + (int)t.entries[i].group.torsion.size();
        int ns = t.entries[i + 2].group.rank + (int)t.entries[i + 2].group.torsion.size();
        for (int r = 0; r < nd; ++r)
            for (int c = 0; c < ns; ++c) {
                BigInt diff = composed[r][c] - direct.m[r][c];
                if (r < (int)t.entries[i].group.torsion.size())
                    diff %= t.entries[i].group.torsion[r];
                if (!diff.is_zero()) throw Error("structure maps do not compose associatively");
            }
    }
    finalize_tower(t);
    return t;
}

const DegreeReport& StabilizationReport::at_degree(int n) const {
    for (auto& d : degrees)
        if (d.degree == n) return d;
    throw Error("degree missing from report");
}

StabilizationReport hax(const AmbientSpec& spec, const std::vector<int>& degrees,
                        const std::vector<int>& scales, const WindowSchedule& schedule,
                        const WindowedOptions& opt) {
    StabilizationReport rep;
    for (int n : degrees) {
        DegreeReport dr;
        dr.degree = n;
        dr.scale = scales.front();

        Tower st = scale_tower(spec, n, scales, schedule, opt);
        dr.group = st.entries.front().group;
        dr.window_core = st.entries.front().core_radius;

        bool scale_iso = true, scale_surj = true;
        for (auto& m : st.maps) {
            scale_iso = scale_iso && hom_is_isomorphism(m);
            scale_surj = scale_surj && hom_is_surjective(m);
        }
        dr.mittag_leffler = scale_surj;
        dr.lim1_known = scale_surj;
        dr.lim1_zero = scale_surj;

        // margin robustness: recompute the final entry with margin+1 at the
        // extreme scales and require the same group
        bool margin_ok = true;
        {
            int entries = (int)schedule.steps.size() - schedule.margin;
            int j = entries - 2;
            if (j < 0) j = 0;
            if (j + schedule.margin + 1 < (int)schedule.steps.size()) {
                auto [core_max, pad_max] = schedule.steps.back();
                Window w = make_window(spec, core_max, pad_max);
                for (int k : {scales.front(), scales.back()}) {
                    TowerEntry base = windowed_entry(w, k, n, schedule.steps[j].first,
                                                     schedule.steps[j + schedule.margin].first, opt);
                    TowerEntry wide =
                        windowed_entry(w, k, n, schedule.steps[j].first,
                                       schedule.steps[j + schedule.margin + 1].first, opt);
                    if (!(base.group == wide.group)) margin_ok = false;
                    if (scales.front() == scales.back()) break;
                }
            } else {
                margin_ok = false; // cannot probe a wider margin on this schedule
            }
        }

        dr.confidence = (scale_iso && margin_ok && st.maps_verified)
                            ? Confidence::exact_on_window
                            : Confidence::heuristic;
        rep.degrees.push_back(std::move(dr));
    }
    return rep;
}

} // namespace roelab
