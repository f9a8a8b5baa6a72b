// Exact minimum-weight perfect matching decoder core.
//
// Layout of this file:
//   1. max_weight_matching: an exact primal-dual blossom implementation
//      (port of the Galil 1986 algorithm as implemented by van Rantwijk;
//      maximum-cardinality mode only, double weights).
//   2. Decoder: space-time matching graph with a virtual boundary node,
//      all-pairs Dijkstra precompute (distances + logical-crossing
//      parity), and per-shot decoding by safe edge pruning, connected
//      component decomposition, bitmask DP for small components and
//      blossom matching for large ones.
//
// Pruning soundness: an inter-defect edge with d(i,j) > d(i,B) + d(j,B)
// can never appear in some optimal matching (pairing both defects to the
// boundary instead is no worse), so restricting to edges with
// d(i,j) <= d(i,B) + d(j,B) preserves the optimal total weight, and the
// optimum then decomposes over connected components of the kept edges.

#include <pybind11/pybind11.h>
#include <pybind11/numpy.h>
#include <pybind11/stl.h>

#include <algorithm>
#include <cassert>
#include <functional>
#include <cstdint>
#include <limits>
#include <queue>
#include <stdexcept>
#include <unordered_map>
#include <vector>

namespace py = pybind11;

namespace {

constexpr int NONE = -1;
constexpr int NO_NODE = -2;
constexpr double INF = std::numeric_limits<double>::infinity();

// ---------------------------------------------------------------------------
// 1. Maximum-weight maximum-cardinality matching (blossom algorithm).
// ---------------------------------------------------------------------------

struct WEdge {
    int i, j;
    double w;
};

struct BestEdge {
    int v = NONE, w = NONE, eid = NONE;
    bool valid() const { return v != NONE; }
};

class MaxWeightMatching {
  public:
    MaxWeightMatching(int n, const std::vector<WEdge>& edges)
        : n_(n), edges_(edges) {}

    // Returns mate[v] (vertex id or -1) of a maximum-cardinality matching
    // of maximum weight among maximum-cardinality matchings.
    std::vector<int> solve() {
        const int m = static_cast<int>(edges_.size());
        const int cap = 2 * n_;  // vertices + worst-case live blossoms

        adj_.assign(n_, {});
        pair2eid_.clear();
        double maxweight = 0.0;
        for (int e = 0; e < m; ++e) {
            const WEdge& ed = edges_[e];
            adj_[ed.i].push_back({ed.j, e});
            adj_[ed.j].push_back({ed.i, e});
            pair2eid_[pack(ed.i, ed.j)] = e;
            maxweight = std::max(maxweight, ed.w);
        }

        mate_.assign(n_, NONE);
        label_.assign(cap, 0);
        labeledge_.assign(cap, BestEdge{});
        labeledge_set_.assign(cap, false);
        inblossom_.resize(n_);
        for (int v = 0; v < n_; ++v) inblossom_[v] = v;
        blossomparent_.assign(cap, NONE);
        blossombase_.resize(cap);
        for (int v = 0; v < n_; ++v) blossombase_[v] = v;
        bestedge_.assign(cap, BestEdge{});
        dualvar_.assign(n_, maxweight);
        blossomdual_.assign(cap, 0.0);
        allowedge_.assign(m, false);
        blossoms_.assign(cap, Blossom{});
        alive_.assign(cap, false);
        free_ids_.clear();
        for (int b = cap - 1; b >= n_; --b) free_ids_.push_back(b);
        queue_.clear();

        mainLoop();

        return mate_;
    }

  private:
    struct Blossom {
        std::vector<int> childs;
        std::vector<std::pair<int, int>> edges;  // (v, w) vertex pairs
        std::vector<BestEdge> mybestedges;
        bool has_mybestedges = false;
    };

    static int64_t pack(int a, int b) {
        if (a > b) std::swap(a, b);
        return (static_cast<int64_t>(a) << 32) | static_cast<uint32_t>(b);
    }

    int eid_of(int v, int w) const {
        auto it = pair2eid_.find(pack(v, w));
        assert(it != pair2eid_.end());
        return it->second;
    }

    bool isBlossom(int b) const { return b >= n_; }

    double slack(int eid) const {
        const WEdge& e = edges_[eid];
        return dualvar_[e.i] + dualvar_[e.j] - 2.0 * e.w;
    }
    double slack(const BestEdge& be) const { return slack(be.eid); }

    void leavesInto(int b, std::vector<int>& out) const {
        if (!isBlossom(b)) {
            out.push_back(b);
            return;
        }
        for (int c : blossoms_[b].childs) leavesInto(c, out);
    }
    std::vector<int> leaves(int b) const {
        std::vector<int> out;
        leavesInto(b, out);
        return out;
    }

    int allocBlossom() {
        if (free_ids_.empty())
            throw std::runtime_error("blossom capacity exhausted");
        int b = free_ids_.back();
        free_ids_.pop_back();
        alive_[b] = true;
        blossoms_[b] = Blossom{};
        return b;
    }

    void freeBlossom(int b) {
        alive_[b] = false;
        blossoms_[b] = Blossom{};
        free_ids_.push_back(b);
    }

    void setLabelEdge(int b, int v, int w) {
        labeledge_[b] = BestEdge{v, w, (v == NONE) ? NONE : eid_of(v, w)};
        labeledge_set_[b] = (v != NONE);
    }

    void assignLabel(int w, int t, int v) {
        int b = inblossom_[w];
        assert(label_[w] == 0 && label_[b] == 0);
        label_[w] = label_[b] = t;
        if (v != NONE) {
            setLabelEdge(w, v, w);
            setLabelEdge(b, v, w);
        } else {
            labeledge_set_[w] = labeledge_set_[b] = false;
            labeledge_[w] = labeledge_[b] = BestEdge{};
        }
        bestedge_[w] = bestedge_[b] = BestEdge{};
        if (t == 1) {
            if (isBlossom(b)) {
                auto lv = leaves(b);
                queue_.insert(queue_.end(), lv.begin(), lv.end());
            } else {
                queue_.push_back(b);
            }
        } else if (t == 2) {
            int base = blossombase_[b];
            assignLabel(mate_[base], 1, base);
        }
    }

    int scanBlossom(int v, int w) {
        std::vector<int> path;
        int base = NO_NODE;
        while (v != NO_NODE) {
            int b = inblossom_[v];
            if (label_[b] & 4) {
                base = blossombase_[b];
                break;
            }
            assert(label_[b] == 1);
            path.push_back(b);
            label_[b] = 5;
            if (!labeledge_set_[b]) {
                assert(mate_[blossombase_[b]] == NONE);
                v = NO_NODE;
            } else {
                assert(labeledge_[b].v == mate_[blossombase_[b]]);
                v = labeledge_[b].v;
                b = inblossom_[v];
                assert(label_[b] == 2);
                v = labeledge_[b].v;
            }
            if (w != NO_NODE) std::swap(v, w);
        }
        for (int b : path) label_[b] = 1;
        return base;
    }

    void addBlossom(int base, int v, int w) {
        int bb = inblossom_[base];
        int bv = inblossom_[v];
        int bw = inblossom_[w];
        int b = allocBlossom();
        blossombase_[b] = base;
        blossomparent_[b] = NONE;
        blossomparent_[bb] = b;
        Blossom& bl = blossoms_[b];
        bl.childs.clear();
        bl.edges.clear();
        bl.edges.emplace_back(v, w);
        // Trace back from v to base.
        while (bv != bb) {
            blossomparent_[bv] = b;
            bl.childs.push_back(bv);
            bl.edges.push_back({labeledge_[bv].v, labeledge_[bv].w});
            assert(label_[bv] == 2 ||
                   (label_[bv] == 1 &&
                    labeledge_[bv].v == mate_[blossombase_[bv]]));
            v = labeledge_[bv].v;
            bv = inblossom_[v];
        }
        bl.childs.push_back(bb);
        std::reverse(bl.childs.begin(), bl.childs.end());
        std::reverse(bl.edges.begin(), bl.edges.end());
        // Trace back from w to base.
        while (bw != bb) {
            blossomparent_[bw] = b;
            bl.childs.push_back(bw);
            bl.edges.push_back({labeledge_[bw].w, labeledge_[bw].v});
            assert(label_[bw] == 2 ||
                   (label_[bw] == 1 &&
                    labeledge_[bw].v == mate_[blossombase_[bw]]));
            w = labeledge_[bw].v;
            bw = inblossom_[w];
        }
        assert(label_[bb] == 1);
        label_[b] = 1;
        labeledge_[b] = labeledge_[bb];
        labeledge_set_[b] = labeledge_set_[bb];
        blossomdual_[b] = 0.0;
        // Relabel vertices.
        for (int lv : leaves(b)) {
            if (label_[inblossom_[lv]] == 2) queue_.push_back(lv);
            inblossom_[lv] = b;
        }
        // Compute bl.mybestedges.
        std::unordered_map<int, BestEdge> bestedgeto;
        for (int bchild : bl.childs) {
            std::vector<BestEdge> nblist;
            if (isBlossom(bchild)) {
                Blossom& cb = blossoms_[bchild];
                if (cb.has_mybestedges) {
                    nblist = std::move(cb.mybestedges);
                    cb.mybestedges.clear();
                    cb.has_mybestedges = false;
                } else {
                    for (int lv : leaves(bchild))
                        for (auto& [nb, eid] : adj_[lv])
                            if (nb != lv) nblist.push_back({lv, nb, eid});
                }
            } else {
                for (auto& [nb, eid] : adj_[bchild])
                    if (nb != bchild) nblist.push_back({bchild, nb, eid});
            }
            for (BestEdge k : nblist) {
                if (inblossom_[k.w] == b) std::swap(k.v, k.w);
                int bj = inblossom_[k.w];
                auto it = bestedgeto.find(bj);
                if (bj != b && label_[bj] == 1 &&
                    (it == bestedgeto.end() ||
                     slack(k) < slack(it->second))) {
                    bestedgeto[bj] = k;
                }
            }
            bestedge_[bchild] = BestEdge{};
        }
        bl.mybestedges.clear();
        for (auto& [bj, k] : bestedgeto) bl.mybestedges.push_back(k);
        bl.has_mybestedges = true;
        // Select bestedge[b].
        bestedge_[b] = BestEdge{};
        double mybestslack = 0.0;
        bool have = false;
        for (const BestEdge& k : bl.mybestedges) {
            double ks = slack(k);
            if (!have || ks < mybestslack) {
                have = true;
                mybestslack = ks;
                bestedge_[b] = k;
            }
        }
    }

    void allowPair(int p, int q) {
        allowedge_[eid_of(p, q)] = true;
    }

    void expandBlossom(int b, bool endstage) {
        Blossom bl = std::move(blossoms_[b]);  // keep data past freeBlossom
        const int len = static_cast<int>(bl.childs.size());
        auto childAt = [&](int j) -> int {
            return bl.childs[((j % len) + len) % len];
        };
        auto edgeAt = [&](int j) -> std::pair<int, int> {
            return bl.edges[((j % len) + len) % len];
        };
        for (int s : bl.childs) {
            blossomparent_[s] = NONE;
            if (isBlossom(s)) {
                if (endstage && blossomdual_[s] == 0.0) {
                    expandBlossom(s, endstage);
                } else {
                    for (int lv : leaves(s)) inblossom_[lv] = s;
                }
            } else {
                inblossom_[s] = s;
            }
        }
        if (!endstage && label_[b] == 2) {
            int entrychild = inblossom_[labeledge_[b].w];
            int j = 0;
            for (int i = 0; i < len; ++i)
                if (bl.childs[i] == entrychild) { j = i; break; }
            int jstep;
            if (j & 1) {
                j -= len;
                jstep = 1;
            } else {
                jstep = -1;
            }
            int v = labeledge_[b].v;
            int w = labeledge_[b].w;
            while (j != 0) {
                int p, q;
                if (jstep == 1) {
                    auto e = edgeAt(j);
                    p = e.first; q = e.second;
                } else {
                    auto e = edgeAt(j - 1);
                    p = e.second; q = e.first;
                }
                label_[w] = 0;
                label_[q] = 0;
                assignLabel(w, 2, v);
                allowPair(p, q);
                j += jstep;
                if (jstep == 1) {
                    auto e = edgeAt(j);
                    v = e.first; w = e.second;
                } else {
                    auto e = edgeAt(j - 1);
                    w = e.first; v = e.second;
                }
                allowPair(v, w);
                j += jstep;
            }
            int bw = childAt(j);
            label_[w] = 2;
            label_[bw] = 2;
            setLabelEdge(w, v, w);
            setLabelEdge(bw, v, w);
            bestedge_[bw] = BestEdge{};
            j += jstep;
            while (childAt(j) != entrychild) {
                int bv = childAt(j);
                if (label_[bv] == 1) {
                    j += jstep;
                    continue;
                }
                int lv = NONE;
                if (isBlossom(bv)) {
                    for (int cand : leaves(bv))
                        if (label_[cand] != 0) { lv = cand; break; }
                    if (lv == NONE) lv = leaves(bv).front();  // unlabeled
                } else {
                    lv = bv;
                }
                if (label_[lv] != 0) {
                    assert(label_[lv] == 2);
                    assert(inblossom_[lv] == bv);
                    label_[lv] = 0;
                    label_[mate_[blossombase_[bv]]] = 0;
                    assignLabel(lv, 2, labeledge_[lv].v);
                }
                j += jstep;
            }
        }
        label_[b] = 0;
        labeledge_set_[b] = false;
        labeledge_[b] = BestEdge{};
        bestedge_[b] = BestEdge{};
        blossomparent_[b] = NONE;
        blossomdual_[b] = 0.0;
        freeBlossom(b);
    }

    void augmentBlossom(int b, int v) {
        int t = v;
        while (blossomparent_[t] != b) t = blossomparent_[t];
        if (isBlossom(t)) augmentBlossom(t, v);
        Blossom& bl = blossoms_[b];
        const int len = static_cast<int>(bl.childs.size());
        int i = 0;
        for (int k = 0; k < len; ++k)
            if (bl.childs[k] == t) { i = k; break; }
        int j = i;
        int jstep;
        if (i & 1) {
            j -= len;
            jstep = 1;
        } else {
            jstep = -1;
        }
        auto childAt = [&](int jj) -> int {
            return bl.childs[((jj % len) + len) % len];
        };
        auto edgeAt = [&](int jj) -> std::pair<int, int> {
            return bl.edges[((jj % len) + len) % len];
        };
        while (j != 0) {
            j += jstep;
            int tt = childAt(j);
            int w, x;
            if (jstep == 1) {
                auto e = edgeAt(j);
                w = e.first; x = e.second;
            } else {
                auto e = edgeAt(j - 1);
                x = e.first; w = e.second;
            }
            if (isBlossom(tt)) augmentBlossom(tt, w);
            j += jstep;
            tt = childAt(j);
            if (isBlossom(tt)) augmentBlossom(tt, x);
            mate_[w] = x;
            mate_[x] = w;
        }
        std::rotate(bl.childs.begin(), bl.childs.begin() + i, bl.childs.end());
        std::rotate(bl.edges.begin(), bl.edges.begin() + i, bl.edges.end());
        blossombase_[b] = blossombase_[bl.childs[0]];
        assert(blossombase_[b] == v);
    }

    void augmentMatching(int v, int w) {
        for (auto [s, j] : {std::pair<int, int>{v, w}, {w, v}}) {
            while (true) {
                int bs = inblossom_[s];
                assert(label_[bs] == 1);
                assert((!labeledge_set_[bs] &&
                        mate_[blossombase_[bs]] == NONE) ||
                       labeledge_[bs].v == mate_[blossombase_[bs]]);
                if (isBlossom(bs)) augmentBlossom(bs, s);
                mate_[s] = j;
                if (!labeledge_set_[bs]) break;
                int t = labeledge_[bs].v;
                int bt = inblossom_[t];
                assert(label_[bt] == 2);
                s = labeledge_[bt].v;
                j = labeledge_[bt].w;
                assert(blossombase_[bt] == t);
                if (isBlossom(bt)) augmentBlossom(bt, j);
                mate_[j] = s;
            }
        }
    }

    void mainLoop() {
        const int cap = 2 * n_;
        while (true) {
            std::fill(label_.begin(), label_.end(), 0);
            std::fill(labeledge_set_.begin(), labeledge_set_.end(), false);
            std::fill(bestedge_.begin(), bestedge_.end(), BestEdge{});
            for (int b = n_; b < cap; ++b)
                if (alive_[b]) {
                    blossoms_[b].mybestedges.clear();
                    blossoms_[b].has_mybestedges = false;
                }
            std::fill(allowedge_.begin(), allowedge_.end(), false);
            queue_.clear();

            for (int v = 0; v < n_; ++v)
                if (mate_[v] == NONE && label_[inblossom_[v]] == 0)
                    assignLabel(v, 1, NONE);

            bool augmented = false;
            while (true) {
                while (!queue_.empty() && !augmented) {
                    int v = queue_.back();
                    queue_.pop_back();
                    assert(label_[inblossom_[v]] == 1);
                    for (auto [w, eid] : adj_[v]) {
                        if (w == v) continue;
                        int bv = inblossom_[v];
                        int bw = inblossom_[w];
                        if (bv == bw) continue;
                        double kslack = 0.0;
                        if (!allowedge_[eid]) {
                            kslack = slack(eid);
                            if (kslack <= 0.0) allowedge_[eid] = true;
                        }
                        if (allowedge_[eid]) {
                            if (label_[bw] == 0) {
                                assignLabel(w, 2, v);
                            } else if (label_[bw] == 1) {
                                int base = scanBlossom(v, w);
                                if (base != NO_NODE) {
                                    addBlossom(base, v, w);
                                } else {
                                    augmentMatching(v, w);
                                    augmented = true;
                                    break;
                                }
                            } else if (label_[w] == 0) {
                                assert(label_[bw] == 2);
                                label_[w] = 2;
                                setLabelEdge(w, v, w);
                            }
                        } else if (label_[bw] == 1) {
                            if (!bestedge_[bv].valid() ||
                                kslack < slack(bestedge_[bv]))
                                bestedge_[bv] = BestEdge{v, w, eid};
                        } else if (label_[w] == 0) {
                            if (!bestedge_[w].valid() ||
                                kslack < slack(bestedge_[w]))
                                bestedge_[w] = BestEdge{v, w, eid};
                        }
                    }
                }
                if (augmented) break;

                // Compute the dual update step (maximum-cardinality mode:
                // no delta1).
                int deltatype = -1;
                double delta = 0.0;
                BestEdge deltaedge;
                int deltablossom = NONE;

                for (int v = 0; v < n_; ++v) {
                    if (label_[inblossom_[v]] == 0 && bestedge_[v].valid()) {
                        double d = slack(bestedge_[v]);
                        if (deltatype == -1 || d < delta) {
                            delta = d;
                            deltatype = 2;
                            deltaedge = bestedge_[v];
                        }
                    }
                }
                for (int b = 0; b < cap; ++b) {
                    if (b >= n_ && !alive_[b]) continue;
                    if (blossomparent_[b] == NONE && label_[b] == 1 &&
                        bestedge_[b].valid()) {
                        double d = slack(bestedge_[b]) / 2.0;
                        if (deltatype == -1 || d < delta) {
                            delta = d;
                            deltatype = 3;
                            deltaedge = bestedge_[b];
                        }
                    }
                }
                for (int b = n_; b < cap; ++b) {
                    if (alive_[b] && blossomparent_[b] == NONE &&
                        label_[b] == 2 &&
                        (deltatype == -1 || blossomdual_[b] < delta)) {
                        delta = blossomdual_[b];
                        deltatype = 4;
                        deltablossom = b;
                    }
                }
                if (deltatype == -1) {
                    // Maximum-cardinality optimum reached.
                    deltatype = 1;
                    double mind = dualvar_[0];
                    for (int v = 1; v < n_; ++v)
                        mind = std::min(mind, dualvar_[v]);
                    delta = std::max(0.0, mind);
                }

                for (int v = 0; v < n_; ++v) {
                    int lab = label_[inblossom_[v]];
                    if (lab == 1)
                        dualvar_[v] -= delta;
                    else if (lab == 2)
                        dualvar_[v] += delta;
                }
                for (int b = n_; b < cap; ++b) {
                    if (alive_[b] && blossomparent_[b] == NONE) {
                        if (label_[b] == 1)
                            blossomdual_[b] += delta;
                        else if (label_[b] == 2)
                            blossomdual_[b] -= delta;
                    }
                }

                if (deltatype == 1) {
                    break;
                } else if (deltatype == 2) {
                    allowedge_[deltaedge.eid] = true;
                    assert(label_[inblossom_[deltaedge.v]] == 1);
                    queue_.push_back(deltaedge.v);
                } else if (deltatype == 3) {
                    allowedge_[deltaedge.eid] = true;
                    assert(label_[inblossom_[deltaedge.v]] == 1);
                    queue_.push_back(deltaedge.v);
                } else if (deltatype == 4) {
                    expandBlossom(deltablossom, false);
                }
            }

            if (!augmented) break;

            for (int b = n_; b < cap; ++b) {
                if (alive_[b] && blossomparent_[b] == NONE &&
                    label_[b] == 1 && blossomdual_[b] == 0.0)
                    expandBlossom(b, true);
            }
        }
    }

    int n_;
    std::vector<WEdge> edges_;
    std::vector<std::vector<std::pair<int, int>>> adj_;  // (neighbor, eid)
    std::unordered_map<int64_t, int> pair2eid_;
    std::vector<int> mate_;
    std::vector<int> label_;
    std::vector<BestEdge> labeledge_;
    std::vector<char> labeledge_set_;
    std::vector<int> inblossom_;
    std::vector<int> blossomparent_;
    std::vector<int> blossombase_;
    std::vector<BestEdge> bestedge_;
    std::vector<double> dualvar_;
    std::vector<double> blossomdual_;
    std::vector<char> allowedge_;
    std::vector<Blossom> blossoms_;
    std::vector<char> alive_;
    std::vector<int> free_ids_;
    std::vector<int> queue_;
};

std::vector<int> max_cardinality_max_weight_mate(
    int n, const std::vector<WEdge>& edges) {
    return MaxWeightMatching(n, edges).solve();
}

// Minimum-weight perfect matching via weight negation (the matching must
// exist; maximum cardinality then forces perfection).
std::vector<int> min_weight_perfect_mate(int n,
                                         const std::vector<WEdge>& edges) {
    std::vector<WEdge> neg(edges);
    for (auto& e : neg) e.w = -e.w;
    auto mate = max_cardinality_max_weight_mate(n, neg);
    for (int v = 0; v < n; ++v)
        if (mate[v] == NONE)
            throw std::runtime_error("no perfect matching exists");
    return mate;
}

// ---------------------------------------------------------------------------
// 2. Space-time decoder.
// ---------------------------------------------------------------------------

struct GraphEdge {
    int u, v;       // v == -1 means the virtual boundary
    double w;
    uint8_t obs;    // parity contribution to the logical reference string
};

class Decoder {
  public:
    Decoder(int n_nodes, std::vector<GraphEdge> edges, int dp_max = 12)
        : n_(n_nodes), boundary_(n_nodes), edges_(std::move(edges)),
          dp_max_(dp_max) {
        const int nv = n_ + 1;
        adj_.assign(nv, {});
        for (const auto& e : edges_) {
            int v = (e.v == -1) ? boundary_ : e.v;
            if (e.u < 0 || e.u >= n_ || v < 0 || v > n_)
                throw std::invalid_argument("edge endpoint out of range");
            if (!(e.w > 0.0))
                throw std::invalid_argument("edge weights must be positive");
            adj_[e.u].push_back({v, e.w, e.obs});
            adj_[v].push_back({e.u, e.w, e.obs});
        }
        precompute();
    }

    int num_nodes() const { return n_; }

    double distance(int a, int b) const {
        int ia = (a == -1) ? boundary_ : a;
        int ib = (b == -1) ? boundary_ : b;
        return dist_[idx(ia, ib)];
    }
    int parity(int a, int b) const {
        int ia = (a == -1) ? boundary_ : a;
        int ib = (b == -1) ? boundary_ : b;
        return par_[idx(ia, ib)];
    }

    struct Result {
        std::vector<std::pair<int, int>> pairs;  // node ids; -1 = boundary
        double total_weight = 0.0;
        bool logical_flip = false;
    };

    Result decode(const std::vector<int>& defects) const {
        Result res;
        const int D = static_cast<int>(defects.size());
        if (D == 0) return res;
        for (int d : defects)
            if (d < 0 || d >= n_)
                throw std::invalid_argument("defect index out of range");

        // Safe pruning + connected components (union-find over defects).
        std::vector<int> uf(D);
        for (int i = 0; i < D; ++i) uf[i] = i;
        auto find = [&](int x) {
            while (uf[x] != x) {
                uf[x] = uf[uf[x]];
                x = uf[x];
            }
            return x;
        };
        for (int a = 0; a < D; ++a) {
            double da_b = dist_[idx(defects[a], boundary_)];
            for (int b = a + 1; b < D; ++b) {
                double dab = dist_[idx(defects[a], defects[b])];
                if (dab <= da_b + dist_[idx(defects[b], boundary_)]) {
                    int ra = find(a), rb = find(b);
                    if (ra != rb) uf[ra] = rb;
                }
            }
        }
        std::unordered_map<int, std::vector<int>> comps;
        for (int i = 0; i < D; ++i) comps[find(i)].push_back(i);

        for (auto& [root, members] : comps) {
            solveComponent(defects, members, res);
        }
        return res;
    }

    // dets: (num_shots, n_nodes) row-major uint8. Returns per-shot
    // predicted logical flip and matching total weight.
    void decode_batch(const uint8_t* dets, ssize_t S, ssize_t stride,
                      uint8_t* flips, double* weights) const {
        std::vector<int> defects;
        for (ssize_t s = 0; s < S; ++s) {
            defects.clear();
            const uint8_t* row = dets + s * stride;
            for (int i = 0; i < n_; ++i)
                if (row[i]) defects.push_back(i);
            Result r = decode(defects);
            flips[s] = r.logical_flip ? 1 : 0;
            weights[s] = r.total_weight;
        }
    }

    py::array_t<double> distances() const {
        const int nv = n_ + 1;
        py::array_t<double> out({nv, nv});
        std::copy(dist_.begin(), dist_.end(), out.mutable_data());
        return out;
    }
    py::array_t<uint8_t> parities() const {
        const int nv = n_ + 1;
        py::array_t<uint8_t> out({nv, nv});
        std::copy(par_.begin(), par_.end(), out.mutable_data());
        return out;
    }

  private:
    struct Arc {
        int to;
        double w;
        uint8_t obs;
    };

    size_t idx(int a, int b) const {
        return static_cast<size_t>(a) * (n_ + 1) + b;
    }

    void precompute() {
        const int nv = n_ + 1;
        dist_.assign(static_cast<size_t>(nv) * nv, INF);
        par_.assign(static_cast<size_t>(nv) * nv, 0);
        std::vector<double> d(nv);
        std::vector<uint8_t> p(nv);
        std::vector<char> done(nv);
        using QItem = std::pair<double, int>;
        for (int s = 0; s < nv; ++s) {
            std::fill(d.begin(), d.end(), INF);
            std::fill(p.begin(), p.end(), 0);
            std::fill(done.begin(), done.end(), 0);
            std::priority_queue<QItem, std::vector<QItem>,
                                std::greater<QItem>> pq;
            d[s] = 0.0;
            pq.push({0.0, s});
            while (!pq.empty()) {
                auto [du, u] = pq.top();
                pq.pop();
                if (done[u]) continue;
                done[u] = 1;
                for (const Arc& a : adj_[u]) {
                    double nd = du + a.w;
                    if (nd < d[a.to]) {
                        d[a.to] = nd;
                        p[a.to] = p[u] ^ a.obs;
                        pq.push({nd, a.to});
                    }
                }
            }
            for (int t = 0; t < nv; ++t) {
                dist_[idx(s, t)] = d[t];
                par_[idx(s, t)] = p[t];
            }
        }
    }

    void solveComponent(const std::vector<int>& defects,
                        const std::vector<int>& members, Result& res) const {
        const int c = static_cast<int>(members.size());
        auto node = [&](int i) { return defects[members[i]]; };
        auto dd = [&](int i, int j) {
            return dist_[idx(node(i), node(j))];
        };
        auto db = [&](int i) { return dist_[idx(node(i), boundary_)]; };

        auto emitPair = [&](int i, int j) {
            res.pairs.emplace_back(node(i), node(j));
            res.total_weight += dd(i, j);
            res.logical_flip ^= (par_[idx(node(i), node(j))] != 0);
        };
        auto emitBoundary = [&](int i) {
            res.pairs.emplace_back(node(i), -1);
            res.total_weight += db(i);
            res.logical_flip ^= (par_[idx(node(i), boundary_)] != 0);
        };

        if (c == 1) {
            emitBoundary(0);
            return;
        }
        if (c == 2) {
            double pairw = dd(0, 1);
            if (pairw <= db(0) + db(1)) {
                emitPair(0, 1);
            } else {
                emitBoundary(0);
                emitBoundary(1);
            }
            return;
        }
        if (c <= dp_max_) {
            solveDP(c, dd, db, emitPair, emitBoundary);
        } else {
            solveBlossom(c, dd, db, emitPair, emitBoundary);
        }
    }

    template <class DD, class DB, class EP, class EB>
    void solveDP(int c, DD dd, DB db, EP emitPair, EB emitBoundary) const {
        const uint32_t full = (1u << c) - 1;
        std::vector<double> f(full + 1, INF);
        std::vector<int8_t> choice(full + 1, -1);  // -1 unset, c = boundary
        f[0] = 0.0;
        for (uint32_t mask = 1; mask <= full; ++mask) {
            int i = __builtin_ctz(mask);
            uint32_t rest = mask ^ (1u << i);
            double best = db(i) + f[rest];
            int bestj = c;  // boundary
            uint32_t mm = rest;
            while (mm) {
                int j = __builtin_ctz(mm);
                mm &= mm - 1;
                double w = dd(i, j) + f[rest ^ (1u << j)];
                if (w < best) {
                    best = w;
                    bestj = j;
                }
            }
            f[mask] = best;
            choice[mask] = static_cast<int8_t>(bestj);
        }
        uint32_t mask = full;
        while (mask) {
            int i = __builtin_ctz(mask);
            int j = choice[mask];
            mask ^= (1u << i);
            if (j == c) {
                emitBoundary(i);
            } else {
                emitPair(i, j);
                mask ^= (1u << j);
            }
        }
    }

    template <class DD, class DB, class EP, class EB>
    void solveBlossom(int c, DD dd, DB db, EP emitPair, EB emitBoundary) const {
        // Nodes: defects 0..c-1, boundary duplicates c..2c-1.
        std::vector<WEdge> es;
        es.reserve(static_cast<size_t>(c) * c);
        for (int i = 0; i < c; ++i) {
            for (int j = i + 1; j < c; ++j) {
                double w = dd(i, j);
                if (w <= db(i) + db(j)) es.push_back({i, j, w});
                es.push_back({c + i, c + j, 0.0});
            }
            es.push_back({i, c + i, db(i)});
        }
        auto mate = min_weight_perfect_mate(2 * c, es);
        for (int i = 0; i < c; ++i) {
            int m = mate[i];
            if (m >= c) {
                emitBoundary(i);
            } else if (m > i) {
                emitPair(i, m);
            }
        }
    }

    int n_;
    int boundary_;
    std::vector<GraphEdge> edges_;
    int dp_max_;
    std::vector<std::vector<Arc>> adj_;
    std::vector<double> dist_;
    std::vector<uint8_t> par_;
};

}  // namespace

PYBIND11_MODULE(_mwpm, m) {
    m.doc() = "Exact minimum-weight perfect matching decoder core";

    m.def(
        "max_weight_matching",
        [](int n, py::array_t<double, py::array::c_style |
                                          py::array::forcecast> edges) {
            auto buf = edges.unchecked<2>();
            if (buf.shape(1) != 3)
                throw std::invalid_argument("edges must be (m, 3)");
            std::vector<WEdge> es(buf.shape(0));
            for (ssize_t k = 0; k < buf.shape(0); ++k)
                es[k] = {static_cast<int>(buf(k, 0)),
                         static_cast<int>(buf(k, 1)), buf(k, 2)};
            auto mate = max_cardinality_max_weight_mate(n, es);
            return py::array_t<int>(mate.size(), mate.data());
        },
        py::arg("n"), py::arg("edges"),
        "Maximum-cardinality maximum-weight matching; returns mate array "
        "with -1 for unmatched vertices.");

    m.def(
        "min_weight_perfect_matching",
        [](int n, py::array_t<double, py::array::c_style |
                                          py::array::forcecast> edges) {
            auto buf = edges.unchecked<2>();
            if (buf.shape(1) != 3)
                throw std::invalid_argument("edges must be (m, 3)");
            std::vector<WEdge> es(buf.shape(0));
            for (ssize_t k = 0; k < buf.shape(0); ++k)
                es[k] = {static_cast<int>(buf(k, 0)),
                         static_cast<int>(buf(k, 1)), buf(k, 2)};
            auto mate = min_weight_perfect_mate(n, es);
            return py::array_t<int>(mate.size(), mate.data());
        },
        py::arg("n"), py::arg("edges"));

    py::class_<Decoder>(m, "Decoder")
        .def(py::init([](int n_nodes,
                         py::array_t<int, py::array::c_style |
                                              py::array::forcecast> uv,
                         py::array_t<double, py::array::c_style |
                                                 py::array::forcecast> w,
                         py::array_t<uint8_t, py::array::c_style |
                                                  py::array::forcecast> obs,
                         int dp_max) {
                 auto buv = uv.unchecked<2>();
                 auto bw = w.unchecked<1>();
                 auto bo = obs.unchecked<1>();
                 if (buv.shape(1) != 2 || bw.shape(0) != buv.shape(0) ||
                     bo.shape(0) != buv.shape(0))
                     throw std::invalid_argument("edge array shape mismatch");
                 std::vector<GraphEdge> es(buv.shape(0));
                 for (ssize_t k = 0; k < buv.shape(0); ++k)
                     es[k] = {buv(k, 0), buv(k, 1), bw(k), bo(k)};
                 return new Decoder(n_nodes, std::move(es), dp_max);
             }),
             py::arg("n_nodes"), py::arg("edges_uv"), py::arg("weights"),
             py::arg("obs"), py::arg("dp_max") = 12)
        .def_property_readonly("num_nodes", &Decoder::num_nodes)
        .def("distance", &Decoder::distance)
        .def("parity", &Decoder::parity)
        .def("distances", &Decoder::distances)
        .def("parities", &Decoder::parities)
        .def("decode",
             [](const Decoder& dec, std::vector<int> defects) {
                 auto r = dec.decode(defects);
                 return py::make_tuple(r.pairs, r.total_weight,
                                       r.logical_flip);
             },
             py::arg("defects"))
        .def("decode_batch",
             [](const Decoder& dec,
                py::array_t<uint8_t, py::array::c_style |
                                         py::array::forcecast> dets) {
                 auto buf = dets.unchecked<2>();
                 if (buf.shape(1) != dec.num_nodes())
                     throw std::invalid_argument(
                         "detection matrix width != num_nodes");
                 ssize_t S = buf.shape(0);
                 py::array_t<uint8_t> flips(S);
                 py::array_t<double> weights(S);
                 {
                     py::gil_scoped_release release;
                     dec.decode_batch(buf.data(0, 0), S, buf.shape(1),
                                      flips.mutable_data(),
                                      weights.mutable_data());
                 }
                 return py::make_tuple(flips, weights);
             },
             py::arg("dets"));
}
