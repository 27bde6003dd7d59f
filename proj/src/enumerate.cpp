#include "finsite/enumerate.hpp"

#include <algorithm>
#include <numeric>
#include <vector>

namespace finsite {

RawCategory small_to_raw(const SmallCat& c) {
    RawCategory raw;
    for (int o = 0; o < c.nobj; ++o) raw.objects.push_back("o" + std::to_string(o));
    for (int m = 0; m < c.nmor; ++m)
        raw.morphisms.push_back({"m" + std::to_string(m), c.dom[m], c.cod[m]});
    raw.identities.assign(c.ident.begin(), c.ident.begin() + c.nobj);
    for (int g = 0; g < c.nmor; ++g)
        for (int f = 0; f < c.nmor; ++f)
            if (c.composable(g, f)) raw.composition.push_back({g, f, c.comp[g][f]});
    return raw;
}

namespace {

using Perm = std::array<uint8_t, kMaxSmallMorphisms>;

struct Shape {
    int nobj = 0, nmor = 0;
    int N[3][3] = {};            // hom-set sizes
    int block_start[3][3] = {};  // first morphism id of each block
    SmallCat proto;              // dom/cod/ident laid out, comp unknown
    std::vector<Perm> group, group_inv;
    std::vector<std::pair<uint8_t, uint8_t>> cells;  // free cells in fill order
};

// Morphism layout: blocks (dom,cod) in row-major order, identity first inside
// each diagonal block.
void layout_shape(Shape& s) {
    int id = 0;
    for (int i = 0; i < s.nobj; ++i)
        for (int j = 0; j < s.nobj; ++j) {
            s.block_start[i][j] = id;
            for (int t = 0; t < s.N[i][j]; ++t) {
                s.proto.dom[id] = static_cast<uint8_t>(i);
                s.proto.cod[id] = static_cast<uint8_t>(j);
                ++id;
            }
        }
    s.nmor = id;
    s.proto.nobj = s.nobj;
    s.proto.nmor = s.nmor;
    for (int i = 0; i < s.nobj; ++i) s.proto.ident[i] = static_cast<uint8_t>(s.block_start[i][i]);

    // free cells: composable pairs of non-identities; endo-diagonal cells
    // first (they pin the relabeling group fastest), then row-major
    auto is_id = [&](int m) { return s.proto.is_identity(m); };
    for (int m = 0; m < s.nmor; ++m)
        if (!is_id(m) && s.proto.dom[m] == s.proto.cod[m])
            s.cells.push_back({static_cast<uint8_t>(m), static_cast<uint8_t>(m)});
    for (int g = 0; g < s.nmor; ++g)
        for (int f = 0; f < s.nmor; ++f) {
            if (g == f && s.proto.dom[g] == s.proto.cod[g]) continue;
            if (is_id(g) || is_id(f)) continue;
            if (s.proto.cod[f] != s.proto.dom[g]) continue;
            s.cells.push_back({static_cast<uint8_t>(g), static_cast<uint8_t>(f)});
        }
}

// The relabeling group: object permutations preserving N, combined with a
// bijection per block (diagonal blocks keep the identity at slot 0).
void build_group(Shape& s) {
    std::vector<int> objperm(s.nobj);
    std::iota(objperm.begin(), objperm.end(), 0);
    do {
        bool preserves = true;
        for (int i = 0; i < s.nobj && preserves; ++i)
            for (int j = 0; j < s.nobj; ++j)
                if (s.N[objperm[i]][objperm[j]] != s.N[i][j]) {
                    preserves = false;
                    break;
                }
        if (!preserves) continue;

        // per-block bijections, DFS over blocks in row-major order
        std::vector<std::vector<int>> choices;  // per block, the chosen mapping
        std::vector<std::pair<int, int>> blocks;
        for (int i = 0; i < s.nobj; ++i)
            for (int j = 0; j < s.nobj; ++j)
                if (s.N[i][j] > 0) blocks.push_back({i, j});

        std::vector<std::vector<int>> block_maps(blocks.size());
        auto rec = [&](auto&& self, size_t bi) -> void {
            if (bi == blocks.size()) {
                Perm sigma{};
                for (size_t b = 0; b < blocks.size(); ++b) {
                    auto [i, j] = blocks[b];
                    const int from = s.block_start[i][j];
                    const int to = s.block_start[objperm[i]][objperm[j]];
                    for (int t = 0; t < s.N[i][j]; ++t)
                        sigma[from + t] = static_cast<uint8_t>(to + block_maps[b][t]);
                }
                s.group.push_back(sigma);
                Perm inv{};
                for (int m = 0; m < s.nmor; ++m) inv[sigma[m]] = static_cast<uint8_t>(m);
                s.group_inv.push_back(inv);
                return;
            }
            auto [i, j] = blocks[bi];
            const int sz = s.N[i][j];
            std::vector<int> map(sz);
            std::iota(map.begin(), map.end(), 0);
            if (i == j) {
                // identity slot fixed; permute slots 1..sz-1
                std::vector<int> rest(map.begin() + 1, map.end());
                do {
                    for (int t = 1; t < sz; ++t) map[t] = rest[t - 1];
                    block_maps[bi] = map;
                    self(self, bi + 1);
                } while (std::next_permutation(rest.begin(), rest.end()));
            } else {
                do {
                    block_maps[bi] = map;
                    self(self, bi + 1);
                } while (std::next_permutation(map.begin(), map.end()));
            }
        };
        rec(rec, 0);
    } while (std::next_permutation(objperm.begin(), objperm.end()));
}

struct AliveEntry {
    uint16_t sigma;
    uint16_t frontier;
};

class TableSearch {
public:
    TableSearch(const Shape& shape, const std::function<void(const SmallCat&)>& emit)
        : s_(shape), emit_(emit) {
        cat_ = s_.proto;
        for (auto& row : cat_.comp) row.fill(-2);
        for (int g = 0; g < s_.nmor; ++g)
            for (int f = 0; f < s_.nmor; ++f)
                if (cat_.composable(g, f)) cat_.comp[g][f] = -1;
        // identity composites are forced
        for (int f = 0; f < s_.nmor; ++f) {
            cat_.comp[cat_.ident[cat_.cod[f]]][f] = static_cast<int8_t>(f);
            cat_.comp[f][cat_.ident[cat_.dom[f]]] = static_cast<int8_t>(f);
        }
        // per-cell candidate lists: the block dom(f) -> cod(g)
        candidates_.resize(s_.cells.size());
        for (size_t i = 0; i < s_.cells.size(); ++i) {
            auto [g, f] = s_.cells[i];
            const int bi = cat_.dom[f], bj = cat_.cod[g];
            const int start = s_.block_start[bi][bj];
            for (int t = 0; t < s_.N[bi][bj]; ++t)
                candidates_[i].push_back(static_cast<uint8_t>(start + t));
        }
        alive_pool_.reserve(4096);
        for (uint16_t i = 0; i < s_.group.size(); ++i) alive_pool_.push_back({i, 0});
    }

    void run() { dfs(0, 0, alive_pool_.size()); }

private:
    // Advance one alive entry's comparison frontier.  Returns +1 if sigma's
    // image is lex-greater (drop), -1 if lex-smaller (prune the branch),
    // 0 if still alive (frontier updated in place).
    int advance(AliveEntry& e) const {
        const Perm& sig = s_.group[e.sigma];
        const Perm& inv = s_.group_inv[e.sigma];
        while (e.frontier < s_.cells.size()) {
            auto [g, f] = s_.cells[e.frontier];
            const int cur = cat_.comp[g][f];
            if (cur < 0) break;
            const int src = cat_.comp[inv[g]][inv[f]];
            if (src < 0) break;
            const int img = sig[src];
            if (img < cur) return -1;
            if (img > cur) return +1;
            ++e.frontier;
        }
        return 0;
    }

    // Filter the parent alive range [from,to) into a fresh range; returns
    // false when the branch must be pruned.
    bool filter_alive(size_t from, size_t to, size_t& child_from, size_t& child_to) {
        child_from = alive_pool_.size();
        for (size_t i = from; i < to; ++i) {
            AliveEntry e = alive_pool_[i];
            const int verdict = advance(e);
            if (verdict < 0) {
                alive_pool_.resize(child_from);
                return false;
            }
            if (verdict == 0) alive_pool_.push_back(e);
        }
        child_to = alive_pool_.size();
        return true;
    }

    bool assign(int g, int f, int v) {
        const int cur = cat_.comp[g][f];
        if (cur >= 0) return cur == v;
        cat_.comp[g][f] = static_cast<int8_t>(v);
        undo_.push_back({static_cast<uint8_t>(g), static_cast<uint8_t>(f)});
        // associativity instances touching (g,f): as outer-left with every
        // known (f,c), and as outer-right with every known (c,g)
        for (int c = 0; c < s_.nmor; ++c) {
            if (cat_.cod[c] == cat_.dom[f]) {
                const int w = cat_.comp[f][c];
                if (w >= 0) {
                    // (g∘f)∘c = g∘(f∘c):  v∘c  vs  g∘w
                    const int x1 = cat_.comp[v][c], x2 = cat_.comp[g][w];
                    if (x1 >= 0 && x2 >= 0) {
                        if (x1 != x2) return false;
                    } else if (x1 >= 0) {
                        if (!assign(g, w, x1)) return false;
                    } else if (x2 >= 0) {
                        if (!assign(v, c, x2)) return false;
                    }
                }
            }
            if (cat_.cod[g] == cat_.dom[c]) {
                const int w = cat_.comp[c][g];
                if (w >= 0) {
                    // (c∘g)∘f = c∘(g∘f):  w∘f  vs  c∘v
                    const int x1 = cat_.comp[w][f], x2 = cat_.comp[c][v];
                    if (x1 >= 0 && x2 >= 0) {
                        if (x1 != x2) return false;
                    } else if (x1 >= 0) {
                        if (!assign(c, v, x1)) return false;
                    } else if (x2 >= 0) {
                        if (!assign(w, f, x2)) return false;
                    }
                }
            }
        }
        return true;
    }

    bool fully_associative() const {
        for (int h = 0; h < s_.nmor; ++h)
            for (int g = 0; g < s_.nmor; ++g) {
                if (cat_.cod[g] != cat_.dom[h]) continue;
                const int hg = cat_.comp[h][g];
                for (int f = 0; f < s_.nmor; ++f) {
                    if (cat_.cod[f] != cat_.dom[g]) continue;
                    if (cat_.comp[hg][f] != cat_.comp[h][cat_.comp[g][f]]) return false;
                }
            }
        return true;
    }

    void undo_to(size_t mark) {
        while (undo_.size() > mark) {
            auto [g, f] = undo_.back();
            undo_.pop_back();
            cat_.comp[g][f] = -1;
        }
    }

    void dfs(size_t cell_idx, size_t alive_from, size_t alive_to) {
        while (cell_idx < s_.cells.size() &&
               cat_.comp[s_.cells[cell_idx].first][s_.cells[cell_idx].second] >= 0)
            ++cell_idx;
        if (cell_idx == s_.cells.size()) {
            // The incremental propagation skips a triple while both of its
            // outer composites are unknown, so re-verify associativity in
            // full before accepting the leaf.
            if (!fully_associative()) return;
            // resolve all comparison frontiers (everything is determined now)
            for (size_t i = alive_from; i < alive_to; ++i) {
                AliveEntry e = alive_pool_[i];
                if (advance(e) < 0) return;
            }
            emit_(cat_);
            return;
        }
        auto [g, f] = s_.cells[cell_idx];
        for (uint8_t v : candidates_[cell_idx]) {
            const size_t mark = undo_.size();
            if (assign(g, f, v)) {
                size_t child_from, child_to;
                if (filter_alive(alive_from, alive_to, child_from, child_to)) {
                    dfs(cell_idx + 1, child_from, child_to);
                    alive_pool_.resize(child_from);
                }
            }
            undo_to(mark);
        }
    }

    const Shape& s_;
    const std::function<void(const SmallCat&)>& emit_;
    SmallCat cat_;
    std::vector<std::vector<uint8_t>> candidates_;
    std::vector<std::pair<uint8_t, uint8_t>> undo_;
    std::vector<AliveEntry> alive_pool_;
};

// All canonical hom matrices for k objects and exactly n morphisms:
// N[i][i] >= 1, sum N = n, lex-least under simultaneous row/col permutation,
// and composability-closed (nonempty hom sets compose into nonempty hom sets).
std::vector<Shape> shapes_for(int k, int n) {
    std::vector<Shape> out;
    std::vector<int> flat(static_cast<size_t>(k) * k, 0);

    std::vector<std::vector<int>> perms;
    std::vector<int> p(k);
    std::iota(p.begin(), p.end(), 0);
    do

        perms.push_back(p);
    while (std::next_permutation(p.begin(), p.end()));

    auto canonical = [&]() {
        for (const auto& pi : perms) {
            // compare flat(N) with flat(N^pi) where N^pi[i][j] = N[pi i][pi j]
            for (size_t idx = 0; idx < flat.size(); ++idx) {
                const int i = static_cast<int>(idx) / k, j = static_cast<int>(idx) % k;
                const int a = flat[idx];
                const int b = flat[static_cast<size_t>(pi[i]) * k + pi[j]];
                if (b < a) return false;
                if (b > a) break;
            }
        }
        return true;
    };
    auto closed = [&]() {
        for (int i = 0; i < k; ++i)
            for (int j = 0; j < k; ++j)
                for (int l = 0; l < k; ++l)
                    if (flat[static_cast<size_t>(i) * k + j] > 0 &&
                        flat[static_cast<size_t>(j) * k + l] > 0 &&
                        flat[static_cast<size_t>(i) * k + l] == 0)
                        return false;
        return true;
    };

    auto rec = [&](auto&& self, int idx, int remaining) -> void {
        if (idx == k * k) {
            if (remaining != 0) return;
            if (!canonical() || !closed()) return;
            Shape s;
            s.nobj = k;
            for (int i = 0; i < k; ++i)
                for (int j = 0; j < k; ++j) s.N[i][j] = flat[static_cast<size_t>(i) * k + j];
            layout_shape(s);
            build_group(s);
            out.push_back(std::move(s));
            return;
        }
        const int i = idx / k, j = idx % k;
        const int lo = (i == j) ? 1 : 0;
        for (int v = lo; v <= remaining; ++v) {
            flat[static_cast<size_t>(idx)] = v;
            self(self, idx + 1, remaining - v);
        }
        flat[static_cast<size_t>(idx)] = 0;
    };
    rec(rec, 0, n);
    return out;
}

}  // namespace

void enumerate_categories(int max_objects, int max_morphisms,
                          const std::function<void(const SmallCat&)>& emit) {
    check(1 <= max_objects && max_objects <= kMaxSmallObjects, Errc::BadInput,
          "object bound out of range");
    check(1 <= max_morphisms && max_morphisms <= kMaxSmallMorphisms, Errc::BadInput,
          "morphism bound out of range");
    for (int k = 1; k <= max_objects; ++k)
        for (int n = k; n <= max_morphisms; ++n)
            for (const Shape& s : shapes_for(k, n)) {
                TableSearch search(s, emit);
                search.run();
            }
}

std::map<std::pair<int, int>, long long> enumeration_census(int max_objects, int max_morphisms) {
    std::map<std::pair<int, int>, long long> census;
    enumerate_categories(max_objects, max_morphisms,
                         [&](const SmallCat& c) { ++census[{c.nobj, c.nmor}]; });
    return census;
}

}  // namespace finsite
