#include "ttess/enumerate.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <queue>

#include "ttess/operators.hpp"

namespace ttess {

namespace {

// Separation demanded between crossings, corners and the boundary.
double general_position_eps(const Polygon& domain) { return 1e-7 * diameter(domain); }

}  // namespace

PatternLayout::PatternLayout(LinePattern pattern, Tolerance tol) : pattern_(std::move(pattern)), tol_(tol) {
    const auto& dom = pattern_.domain;
    const auto& lines = pattern_.lines;
    const std::size_t k = lines.size();
    const double gp = general_position_eps(dom);
    breaks_.assign(k, {});
    partner_.assign(k, {});

    std::vector<std::pair<double, double>> chords(k);
    for (std::size_t i = 0; i < k; ++i) {
        const auto ch = chord(lines[i], dom, tol_);
        if (!ch) {
            throw EnumerationError("pattern line misses the domain");
        }
        for (const Point& c : dom) {
            if (std::abs(lines[i].signed_distance(c)) <= gp) {
                throw EnumerationError("pattern line passes through a corner of the domain");
            }
        }
        const double a = lines[i].param(ch->first);
        const double b = lines[i].param(ch->second);
        chords[i] = {std::min(a, b), std::max(a, b)};
    }

    std::vector<std::vector<std::pair<double, int>>> cuts(k);
    std::vector<Point> crossings;
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = i + 1; j < k; ++j) {
            if (same_line(lines[i], lines[j], tol_)) {
                throw EnumerationError("pattern contains two equal lines");
            }
            const auto x = intersect(lines[i], lines[j]);
            if (!x) {
                continue;
            }
            const double ti = lines[i].param(*x);
            const double tj = lines[j].param(*x);
            const bool in_i = ti > chords[i].first - gp && ti < chords[i].second + gp;
            const bool in_j = tj > chords[j].first - gp && tj < chords[j].second + gp;
            if (!in_i || !in_j) {
                continue;
            }
            if (ti < chords[i].first + gp || ti > chords[i].second - gp || tj < chords[j].first + gp ||
                tj > chords[j].second - gp) {
                throw EnumerationError("two pattern lines cross on the domain boundary");
            }
            for (const Point& c : crossings) {
                if (distance(c, *x) <= gp) {
                    throw EnumerationError("three pattern lines are concurrent");
                }
            }
            crossings.push_back(*x);
            cuts[i].push_back({ti, static_cast<int>(j)});
            cuts[j].push_back({tj, static_cast<int>(i)});
        }
    }
    for (std::size_t i = 0; i < k; ++i) {
        std::sort(cuts[i].begin(), cuts[i].end());
        breaks_[i].push_back(chords[i].first);
        partner_[i].push_back(-1);
        for (const auto& [t, j] : cuts[i]) {
            breaks_[i].push_back(t);
            partner_[i].push_back(j);
        }
        breaks_[i].push_back(chords[i].second);
        partner_[i].push_back(-1);
    }
}

int PatternLayout::break_on(std::size_t j, std::size_t i) const {
    const auto& p = partner_[j];
    for (std::size_t k = 0; k < p.size(); ++k) {
        if (p[k] == static_cast<int>(i)) {
            return static_cast<int>(k);
        }
    }
    return -1;
}

std::optional<StateKey> PatternLayout::key(const TTessellation& t) const {
    const std::size_t k = size();
    if (t.stats().nseint != static_cast<long>(k)) {
        return std::nullopt;
    }
    const double gp = general_position_eps(pattern_.domain);
    const Tolerance match{gp, gp};
    StateKey out(k, {-1, -1});
    for (SegmentId s : t.internal_segments()) {
        const auto& seg = t.segment(s);
        const int i = pattern_.find(seg.line, match);
        if (i < 0 || out[static_cast<std::size_t>(i)].first >= 0) {
            return std::nullopt;
        }
        const Line& line = pattern_.lines[static_cast<std::size_t>(i)];
        const auto& br = breaks_[static_cast<std::size_t>(i)];
        auto nearest = [&](Point q) {
            const double tq = line.param(q);
            int best = -1;
            for (std::size_t b = 0; b < br.size(); ++b) {
                if (std::abs(br[b] - tq) <= 1e3 * gp) {
                    best = static_cast<int>(b);
                }
            }
            return best;
        };
        int a = nearest(t.vertex(seg.verts.front()).pos);
        int b = nearest(t.vertex(seg.verts.back()).pos);
        if (a < 0 || b < 0 || a == b) {
            return std::nullopt;
        }
        out[static_cast<std::size_t>(i)] = {std::min(a, b), std::max(a, b)};
    }
    return out;
}

TTessellation PatternLayout::build(const StateKey& key) const {
    std::vector<TTessellation::SegmentSpec> specs;
    for (std::size_t i = 0; i < key.size(); ++i) {
        const Line& line = pattern_.lines[i];
        specs.push_back({line, line.at(breaks_[i][static_cast<std::size_t>(key[i].first)]),
                         line.at(breaks_[i][static_cast<std::size_t>(key[i].second)])});
    }
    return TTessellation::from_segments(pattern_.domain, specs);
}

std::vector<StateKey> enumerate_keys(const PatternLayout& layout, std::size_t k_max) {
    const std::size_t k = layout.size();
    if (k > k_max) {
        throw EnumerationError("pattern larger than the enumeration limit");
    }
    std::vector<StateKey> out;
    StateKey cur(k);

    // A pair of crossing lines is consistent when no crossing is interior to both
    // segments and every segment ending at the crossing is stopped by the other.
    auto compatible = [&](std::size_t i, std::pair<int, int> si, std::size_t j) {
        const int ki = layout.break_on(i, j);
        if (ki < 0) {
            return true;
        }
        const int kj = layout.break_on(j, i);
        const auto sj = cur[j];
        const bool in_i = si.first < ki && ki < si.second;
        const bool end_i = si.first == ki || si.second == ki;
        const bool in_j = sj.first < kj && kj < sj.second;
        const bool end_j = sj.first == kj || sj.second == kj;
        if (in_i && in_j) {
            return false;
        }
        if (end_i && !in_j) {
            return false;
        }
        if (end_j && !in_i) {
            return false;
        }
        return true;
    };

    auto dfs = [&](auto&& self, std::size_t i) -> void {
        if (i == k) {
            out.push_back(cur);
            return;
        }
        const int m = static_cast<int>(layout.breaks(i).size());
        for (int a = 0; a < m; ++a) {
            for (int b = a + 1; b < m; ++b) {
                bool ok = true;
                for (std::size_t j = 0; j < i && ok; ++j) {
                    ok = compatible(i, {a, b}, j);
                }
                if (ok) {
                    cur[i] = {a, b};
                    self(self, i + 1);
                }
            }
        }
    };
    dfs(dfs, 0);
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<TTessellation> enumerate_ttessellations(const LinePattern& pattern, std::size_t k_max) {
    if (pattern.size() > k_max) {
        throw EnumerationError("pattern larger than the enumeration limit");
    }
    const PatternLayout layout(pattern);
    std::vector<TTessellation> out;
    for (const auto& key : enumerate_keys(layout, k_max)) {
        out.push_back(layout.build(key));
    }
    return out;
}

std::size_t nttl(const LinePattern& pattern, std::size_t k_max) {
    if (pattern.size() > k_max) {
        throw EnumerationError("pattern larger than the enumeration limit");
    }
    return enumerate_keys(PatternLayout(pattern), k_max).size();
}

FlipGraphReport analyze_flip_graph(const PatternLayout& layout, const std::vector<StateKey>& keys) {
    FlipGraphReport rep;
    rep.states = keys.size();
    rep.adjacency.assign(keys.size(), {});
    std::map<StateKey, std::size_t> index;
    for (std::size_t i = 0; i < keys.size(); ++i) {
        index.emplace(keys[i], i);
    }
    for (std::size_t i = 0; i < keys.size(); ++i) {
        const TTessellation t = layout.build(keys[i]);
        for (const Flip& f : enumerate_flips(t)) {
            if (!plan_flip(t, f)) {
                rep.closed = false;
                continue;
            }
            TTessellation u = t;
            apply_update(u, f);
            const auto k = layout.key(u);
            const auto it = k ? index.find(*k) : index.end();
            if (it == index.end()) {
                rep.closed = false;
                continue;
            }
            rep.adjacency[i].push_back(it->second);
            ++rep.edges;
        }
    }
    if (!keys.empty()) {
        std::vector<bool> seen(keys.size(), false);
        std::queue<std::size_t> q;
        q.push(0);
        seen[0] = true;
        while (!q.empty()) {
            const std::size_t a = q.front();
            q.pop();
            for (std::size_t b : rep.adjacency[a]) {
                if (!seen[b]) {
                    seen[b] = true;
                    q.push(b);
                }
            }
        }
        rep.connected = std::all_of(seen.begin(), seen.end(), [](bool s) { return s; });
    }
    return rep;
}

}  // namespace ttess
