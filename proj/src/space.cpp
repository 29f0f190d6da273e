#include "roelab/space.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>
#include <sstream>

namespace roelab {

// ---------------------------------------------------------------------------
// AmbientSpec
// ---------------------------------------------------------------------------

AmbientSpec AmbientSpec::grid(int d) {
    if (d <= 0) throw Error("grid dimension must be positive");
    AmbientSpec s;
    s.kind = Kind::grid;
    s.grid_dim = d;
    return s;
}

AmbientSpec AmbientSpec::halfline() {
    AmbientSpec s;
    s.kind = Kind::halfline;
    return s;
}

AmbientSpec AmbientSpec::finite(std::vector<std::vector<int>> table, std::vector<std::string> names) {
    AmbientSpec s;
    s.kind = Kind::finite;
    s.table = std::move(table);
    s.point_names = std::move(names);
    s.validate();
    return s;
}

AmbientSpec AmbientSpec::free_union(std::vector<AmbientSpec> parts) {
    if (parts.empty()) throw Error("free union needs at least one part");
    AmbientSpec s;
    s.kind = Kind::free_union;
    s.parts = std::move(parts);
    return s;
}

AmbientSpec AmbientSpec::product(AmbientSpec a, AmbientSpec b) {
    AmbientSpec s;
    s.kind = Kind::product;
    s.parts = {std::move(a), std::move(b)};
    return s;
}

void AmbientSpec::validate() const {
    if (kind == Kind::finite) {
        int n = (int)table.size();
        if (n == 0) throw Error("finite space needs at least one point");
        auto name = [&](int i) {
            return i < (int)point_names.size() ? point_names[i] : "p" + std::to_string(i);
        };
        for (int i = 0; i < n; ++i) {
            if ((int)table[i].size() != n) throw Error("distance table is not square");
            if (table[i][i] != 0)
                throw Error("metric violation: d(" + name(i) + "," + name(i) + ") != 0");
        }
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                if (table[i][j] != table[j][i])
                    throw Error("metric violation: asymmetric pair (" + name(i) + "," + name(j) + ")");
                if (i != j && table[i][j] <= 0)
                    throw Error("metric violation: d(" + name(i) + "," + name(j) +
                                ") must be positive off the diagonal");
            }
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                for (int k = 0; k < n; ++k)
                    if (table[i][k] > table[i][j] + table[j][k]) {
                        std::ostringstream os;
                        os << "metric violation: triangle inequality fails on (" << name(i) << ","
                           << name(j) << "," << name(k) << "): " << table[i][k] << " > "
                           << table[i][j] << " + " << table[j][k];
                        throw Error(os.str());
                    }
    }
    for (auto& p : parts) p.validate();
}

int AmbientSpec::coord_len() const {
    switch (kind) {
    case Kind::grid: return grid_dim;
    case Kind::halfline: return 1;
    case Kind::finite: return 1;
    case Kind::free_union: {
        int m = 0;
        for (auto& p : parts) m = std::max(m, p.coord_len());
        return 1 + m;
    }
    case Kind::product: return parts[0].coord_len() + parts[1].coord_len();
    }
    return 0;
}

int AmbientSpec::num_components() const {
    switch (kind) {
    case Kind::grid:
    case Kind::halfline:
    case Kind::finite: return 1;
    case Kind::free_union: {
        int n = 0;
        for (auto& p : parts) n += p.num_components();
        return n;
    }
    case Kind::product: return parts[0].num_components() * parts[1].num_components();
    }
    return 1;
}

namespace {

Coord subcoord(const Coord& p, int from, int len) {
    return Coord(p.begin() + from, p.begin() + from + len);
}

Coord pad_to(Coord c, int len) {
    c.resize(len, 0);
    return c;
}

} // namespace

int AmbientSpec::component_of(const Coord& p) const {
    switch (kind) {
    case Kind::grid:
    case Kind::halfline:
    case Kind::finite: return 0;
    case Kind::free_union: {
        int part = p.at(0);
        int off = 0;
        for (int i = 0; i < part; ++i) off += parts[i].num_components();
        int inner_len = parts[part].coord_len();
        return off + parts[part].component_of(subcoord(p, 1, inner_len));
    }
    case Kind::product: {
        const auto& a = parts[0];
        const auto& b = parts[1];
        int ca = a.component_of(subcoord(p, 0, a.coord_len()));
        int cb = b.component_of(subcoord(p, a.coord_len(), b.coord_len()));
        return ca * b.num_components() + cb;
    }
    }
    return 0;
}

Coord AmbientSpec::component_origin(int component) const {
    switch (kind) {
    case Kind::grid: return Coord(grid_dim, 0);
    case Kind::halfline: return {0};
    case Kind::finite: return {0};
    case Kind::free_union: {
        int off = 0;
        for (int i = 0; i < (int)parts.size(); ++i) {
            int nc = parts[i].num_components();
            if (component < off + nc) {
                Coord inner = parts[i].component_origin(component - off);
                Coord out = {i};
                out.insert(out.end(), inner.begin(), inner.end());
                return pad_to(out, coord_len());
            }
            off += nc;
        }
        throw Error("component index out of range");
    }
    case Kind::product: {
        int nb = parts[1].num_components();
        Coord a = parts[0].component_origin(component / nb);
        Coord b = parts[1].component_origin(component % nb);
        a.insert(a.end(), b.begin(), b.end());
        return a;
    }
    }
    return {};
}

std::optional<int> AmbientSpec::distance(const Coord& p, const Coord& q) const {
    switch (kind) {
    case Kind::grid: {
        int m = 0;
        for (int i = 0; i < grid_dim; ++i) m = std::max(m, std::abs(p[i] - q[i]));
        return m;
    }
    case Kind::halfline: return std::abs(p[0] - q[0]);
    case Kind::finite: return table[p[0]][q[0]];
    case Kind::free_union: {
        if (p[0] != q[0]) return std::nullopt;
        int len = parts[p[0]].coord_len();
        return parts[p[0]].distance(subcoord(p, 1, len), subcoord(q, 1, len));
    }
    case Kind::product: {
        int la = parts[0].coord_len();
        auto da = parts[0].distance(subcoord(p, 0, la), subcoord(q, 0, la));
        auto db = parts[1].distance(subcoord(p, la, parts[1].coord_len()),
                                    subcoord(q, la, parts[1].coord_len()));
        if (!da || !db) return std::nullopt;
        return std::max(*da, *db);
    }
    }
    return std::nullopt;
}

bool AmbientSpec::contains(const Coord& p) const {
    if ((int)p.size() != coord_len()) return false;
    switch (kind) {
    case Kind::grid: return true;
    case Kind::halfline: return p[0] >= 0;
    case Kind::finite: return p[0] >= 0 && p[0] < (int)table.size();
    case Kind::free_union: {
        if (p[0] < 0 || p[0] >= (int)parts.size()) return false;
        int len = parts[p[0]].coord_len();
        for (int i = 1 + len; i < (int)p.size(); ++i)
            if (p[i] != 0) return false;
        return parts[p[0]].contains(subcoord(p, 1, len));
    }
    case Kind::product:
        return parts[0].contains(subcoord(p, 0, parts[0].coord_len())) &&
               parts[1].contains(subcoord(p, parts[0].coord_len(), parts[1].coord_len()));
    }
    return false;
}

std::vector<Coord> AmbientSpec::ball(const Coord& center, int radius) const {
    std::vector<Coord> out;
    switch (kind) {
    case Kind::grid: {
        Coord cur(grid_dim, 0);
        std::function<void(int)> rec = [&](int i) {
            if (i == grid_dim) {
                out.push_back(cur);
                return;
            }
            for (int v = center[i] - radius; v <= center[i] + radius; ++v) {
                cur[i] = v;
                rec(i + 1);
            }
        };
        rec(0);
        break;
    }
    case Kind::halfline:
        for (int v = std::max(0, center[0] - radius); v <= center[0] + radius; ++v) out.push_back({v});
        break;
    case Kind::finite:
        for (int i = 0; i < (int)table.size(); ++i)
            if (table[center[0]][i] <= radius) out.push_back({i});
        break;
    case Kind::free_union: {
        int part = center[0];
        int len = parts[part].coord_len();
        for (auto& q : parts[part].ball(subcoord(center, 1, len), radius)) {
            Coord c = {part};
            c.insert(c.end(), q.begin(), q.end());
            out.push_back(pad_to(std::move(c), coord_len()));
        }
        break;
    }
    case Kind::product: {
        int la = parts[0].coord_len();
        auto ba = parts[0].ball(subcoord(center, 0, la), radius);
        auto bb = parts[1].ball(subcoord(center, la, parts[1].coord_len()), radius);
        for (auto& a : ba)
            for (auto& b : bb) {
                Coord c = a;
                c.insert(c.end(), b.begin(), b.end());
                out.push_back(std::move(c));
            }
        break;
    }
    }
    std::sort(out.begin(), out.end());
    return out;
}

// ---------------------------------------------------------------------------
// Window
// ---------------------------------------------------------------------------

bool Window::in_core(int i) const {
    return std::binary_search(core.begin(), core.end(), i);
}

int Window::index_of(const Coord& p) const {
    auto it = std::lower_bound(pts.begin(), pts.end(), p);
    if (it != pts.end() && *it == p) return (int)(it - pts.begin());
    return -1;
}

const std::vector<std::vector<int>>& Window::adjacency(int k) const {
    for (std::size_t i = 0; i < adj_cache_scale_.size(); ++i)
        if (adj_cache_scale_[i] == k) return adj_cache_[i];
    std::vector<std::vector<int>> adj(n());
    for (int i = 0; i < n(); ++i)
        for (int j = 0; j < n(); ++j)
            if (i != j && related(i, j, k)) adj[i].push_back(j);
    adj_cache_.push_back(std::move(adj));
    adj_cache_scale_.push_back(k);
    return adj_cache_.back();
}

std::vector<int> Window::hop_distances(int src, int k, const std::vector<char>& allowed) const {
    std::vector<int> dist_out(n(), -1);
    if (!allowed.empty() && !allowed[src]) return dist_out;
    const auto& adj = adjacency(k);
    std::deque<int> q;
    dist_out[src] = 0;
    q.push_back(src);
    while (!q.empty()) {
        int u = q.front();
        q.pop_front();
        for (int v : adj[u]) {
            if (!allowed.empty() && !allowed[v]) continue;
            if (dist_out[v] < 0) {
                dist_out[v] = dist_out[u] + 1;
                q.push_back(v);
            }
        }
    }
    return dist_out;
}

std::vector<int> Window::ball_indices(int center, int radius) const {
    std::vector<int> out;
    for (int i = 0; i < n(); ++i) {
        int v = dist[center][i];
        if (v >= 0 && v <= radius) out.push_back(i);
    }
    return out;
}

std::vector<int> Window::all_indices() const {
    std::vector<int> out(n());
    for (int i = 0; i < n(); ++i) out[i] = i;
    return out;
}

Window make_window(const AmbientSpec& spec, int core_radius, int padding) {
    if (core_radius < 0 || padding < 0) throw Error("radii must be nonnegative");
    spec.validate();

    Window w;
    w.spec = spec;
    w.core_radius = core_radius;
    w.faithfulness_radius = padding;

    int R = core_radius + padding;
    std::set<Coord> pts;
    int nc = spec.num_components();
    for (int c = 0; c < nc; ++c) {
        Coord o = spec.component_origin(c);
        for (auto& p : spec.ball(o, R)) pts.insert(p);
    }
    w.pts.assign(pts.begin(), pts.end());

    int n = (int)w.pts.size();
    w.dist.assign(n, std::vector<int>(n, kUnrelated));
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
            auto d = spec.distance(w.pts[i], w.pts[j]);
            w.dist[i][j] = w.dist[j][i] = d ? *d : kUnrelated;
        }

    w.component.resize(n);
    std::vector<Coord> origins(nc);
    for (int c = 0; c < nc; ++c) origins[c] = spec.component_origin(c);
    for (int i = 0; i < n; ++i) {
        int c = spec.component_of(w.pts[i]);
        w.component[i] = c;
        auto d = spec.distance(origins[c], w.pts[i]);
        if (d && *d <= core_radius) w.core.push_back(i);
    }
    w.basepoint = w.index_of(origins[0]);
    if (w.basepoint < 0) throw Error("internal: basepoint missing from window");
    return w;
}

// ---------------------------------------------------------------------------
// Maps
// ---------------------------------------------------------------------------

SpaceMap map_from_rule(const Window& dom, const Window& cod, AmbientRule rule,
                       bool ambient_proper) {
    SpaceMap m;
    m.dom = &dom;
    m.cod = &cod;
    m.rule = rule;
    m.ambient_proper = ambient_proper;
    m.assign.resize(dom.n());
    for (int i = 0; i < dom.n(); ++i) {
        auto img = rule.apply(dom.pts[i]);
        if (!img) throw Error("rule '" + rule.name + "' not evaluable on a window point");
        int j = cod.index_of(*img);
        if (j < 0)
            throw Error("rule '" + rule.name + "' maps a window point outside the codomain window");
        m.assign[i] = j;
    }
    return m;
}

ControlResult check_controlled_proper(const SpaceMap& m, int k_in) {
    const Window& dom = *m.dom;
    const Window& cod = *m.cod;
    ControlResult out;
    int bound = 0;
    bool unbounded = false;
    for (int i = 0; i < dom.n() && !unbounded; ++i)
        for (int j : dom.adjacency(k_in)[i]) {
            int dv = cod.dist[m(i)][m(j)];
            if (dv < 0) {
                unbounded = true;
                break;
            }
            bound = std::max(bound, dv);
        }
    if (!unbounded) out.k_out = bound;
    else out.k_out = std::nullopt;

    // properness: fibers of bounded diameter; conclusive only via ambient rules
    int worst_fiber = 0;
    std::vector<std::vector<int>> fibers(cod.n());
    for (int i = 0; i < dom.n(); ++i) fibers[m(i)].push_back(i);
    for (auto& f : fibers)
        for (std::size_t a = 0; a < f.size(); ++a)
            for (std::size_t b = a + 1; b < f.size(); ++b) {
                int dv = dom.dist[f[a]][f[b]];
                worst_fiber = std::max(worst_fiber, dv < 0 ? dom.n() : dv);
            }
    if (worst_fiber >= std::max(2, dom.core_radius)) out.properness = Properness::improper;
    else if (m.ambient_proper) out.properness = Properness::proper_by_rule;
    else out.properness = Properness::window_proper;
    return out;
}

std::optional<int> check_close(const SpaceMap& f, const SpaceMap& g) {
    if (f.dom != g.dom || f.cod != g.cod) throw Error("check_close: maps must be parallel");
    const Window& cod = *f.cod;
    int bound = 0;
    for (int i = 0; i < f.dom->n(); ++i) {
        int dv = cod.dist[f(i)][g(i)];
        if (dv < 0) return std::nullopt;
        bound = std::max(bound, dv);
    }
    return bound;
}

// ---------------------------------------------------------------------------
// Flasqueness
// ---------------------------------------------------------------------------

std::optional<Coord> rule_iterate(const AmbientRule& f, Coord x, int n) {
    for (int i = 0; i < n; ++i) {
        auto next = f.apply(x);
        if (!next) return std::nullopt;
        x = *next;
    }
    return x;
}

FlasqueResult certify_flasqueness(const Window& w, const AmbientRule& f) {
    const AmbientSpec& spec = w.spec;
    int n = w.n();

    // (i) close to the identity
    int closeness = 0;
    for (int i = 0; i < n; ++i) {
        auto img = f.apply(w.pts[i]);
        if (!img) throw Error("rule '" + f.name + "' not evaluable on a window point");
        auto d = spec.distance(w.pts[i], *img);
        if (!d)
            return FlasquenessFailure{1, "f moves a point to a different coarse component"};
        closeness = std::max(closeness, *d);
    }

    int maxdist = 0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) maxdist = std::max(maxdist, w.dist[i][j]);
    int ncap = 4 * (maxdist + 1) + 8;

    // orbits on ambient coordinates
    std::vector<std::vector<Coord>> orbit(n);
    for (int i = 0; i < n; ++i) {
        orbit[i].push_back(w.pts[i]);
        for (int s = 1; s <= ncap; ++s) {
            auto next = f.apply(orbit[i].back());
            if (!next) throw Error("rule '" + f.name + "' not evaluable along an orbit");
            orbit[i].push_back(*next);
        }
    }

    int nc = spec.num_components();
    std::vector<Coord> origins(nc);
    for (int c = 0; c < nc; ++c) origins[c] = spec.component_origin(c);
    auto in_ball = [&](const Coord& p, int r) {
        int c = spec.component_of(p);
        auto d = spec.distance(origins[c], p);
        return d && *d <= r;
    };

    // (ii) every bounded set is escaped permanently; an orbit that re-enters
    // the set witnesses ambient points streaming into it
    std::vector<int> schedule;
    for (int r = 0; r <= w.core_radius; ++r) {
        int n0 = 0;
        for (int i = 0; i < n; ++i) {
            int last_inside = -1;
            bool inside_prev = in_ball(orbit[i][0], r);
            if (inside_prev) last_inside = 0;
            for (int s = 1; s <= ncap; ++s) {
                bool inside = in_ball(orbit[i][s], r);
                if (inside && !inside_prev)
                    return FlasquenessFailure{
                        2, "orbit of a window point re-enters the radius-" + std::to_string(r) +
                               " ball; the bounded set is never escaped"};
                if (inside) last_inside = s;
                inside_prev = inside;
            }
            if (last_inside == ncap)
                return FlasquenessFailure{2, "a point never leaves the radius-" +
                                                 std::to_string(r) + " ball"};
            n0 = std::max(n0, last_inside + 1);
        }
        schedule.push_back(n0);
    }

    // (iii) iterates of U_k stay uniformly controlled
    std::vector<int> envelope;
    for (int k = 1; k <= w.faithfulness_radius; ++k) {
        int half = 0, full = 0;
        for (int i = 0; i < n; ++i)
            for (int j : w.adjacency(k)[i]) {
                if (j < i) continue;
                for (int s = 0; s <= ncap; ++s) {
                    auto d = spec.distance(orbit[i][s], orbit[j][s]);
                    if (!d)
                        return FlasquenessFailure{3, "an iterate separates coarse components"};
                    if (s <= ncap / 2) half = std::max(half, *d);
                    full = std::max(full, *d);
                }
            }
        if (full > half)
            return FlasquenessFailure{3, "iterated images of U_" + std::to_string(k) +
                                             " keep growing on the window"};
        envelope.push_back(full);
    }

    FlasquenessWitness wit;
    wit.closeness_scale = closeness;
    wit.escape_schedule = std::move(schedule);
    wit.control_envelope = std::move(envelope);
    return wit;
}

// ---------------------------------------------------------------------------
// U-convexity
// ---------------------------------------------------------------------------

ConvexityResult check_u_convex_within(const Window& w, const std::vector<int>& ambient,
                                      const std::vector<int>& Y, int k) {
    std::vector<char> amb_mask(w.n(), 0), y_mask(w.n(), 0);
    for (int i : ambient) amb_mask[i] = 1;
    for (int i : Y) {
        if (!amb_mask[i]) throw Error("check_u_convex: Y must lie inside the ambient subset");
        y_mask[i] = 1;
    }
    int nmax = k > 0 ? w.faithfulness_radius / k : 0;

    // hop metrics from every Y point, through the ambient subset and through Y
    std::vector<std::vector<int>> through_amb(Y.size()), through_y(Y.size());
    for (std::size_t a = 0; a < Y.size(); ++a) {
        through_amb[a] = w.hop_distances(Y[a], k, amb_mask);
        through_y[a] = w.hop_distances(Y[a], k, y_mask);
    }

    ConvexityTable table;
    for (int hops = 1; hops <= nmax; ++hops) {
        int kappa = 0;
        for (std::size_t a = 0; a < Y.size(); ++a)
            for (std::size_t b = 0; b < Y.size(); ++b) {
                int da = through_amb[a][Y[b]];
                if (da < 0 || da > hops) continue;
                int dy = through_y[a][Y[b]];
                if (dy < 0) return ConvexityWitness{Y[a], Y[b], da};
                kappa = std::max(kappa, dy);
            }
        table.kappa.push_back({hops, kappa});
    }
    return table;
}

ConvexityResult check_u_convex(const Window& w, const std::vector<int>& Y, int k) {
    return check_u_convex_within(w, w.all_indices(), Y, k);
}

ConvexPairReport check_convex_pair(const Window& w, const std::vector<int>& Z,
                                   const std::vector<std::vector<int>>& family, int k) {
    for (std::size_t i = 0; i + 1 < family.size(); ++i) {
        std::set<int> a(family[i].begin(), family[i].end());
        for (int v : family[i])
            if (!a.count(v)) throw Error("internal");
        std::set<int> b(family[i + 1].begin(), family[i + 1].end());
        for (int v : family[i])
            if (!b.count(v)) throw Error("non-increasing family");
    }

    ConvexPairReport rep;
    std::vector<char> zmask(w.n(), 0);
    for (int i : Z) zmask[i] = 1;
    for (std::size_t i = 0; i < family.size(); ++i) {
        ConvexPairVerdict v;
        std::vector<char> united = zmask;
        for (int p : family[i]) united[p] = 1;
        v.covering = std::all_of(united.begin(), united.end(), [](char c) { return c != 0; });
        v.y_convex = std::holds_alternative<ConvexityTable>(check_u_convex(w, family[i], k));
        std::vector<int> zy;
        for (int p : family[i])
            if (zmask[p]) zy.push_back(p);
        std::sort(zy.begin(), zy.end());
        v.zy_convex_in_z =
            std::holds_alternative<ConvexityTable>(check_u_convex_within(w, Z, zy, k));
        if (v.covering && rep.cover_index < 0) rep.cover_index = (int)i;
        rep.per_index.push_back(v);
    }
    rep.complementary = rep.cover_index >= 0;
    return rep;
}

} // namespace roelab
