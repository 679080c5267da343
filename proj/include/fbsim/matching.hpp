#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

namespace fbsim {

// Maximum-weight matching in a general graph (Galil's formulation of
// Edmonds' blossom algorithm, following the classic array-based
// implementation by J. van Rantwijk). O(n^3). Integer weights only, so all
// dual variables stay exact. With `max_cardinality` the matching is maximum
// cardinality first, maximum weight among those.
class MaxWeightMatching {
public:
    struct Edge {
        int i, j;
        long long weight;
    };

    // Returns mate[v] = matched partner of v, or -1.
    static std::vector<int> solve(int n_vertices, const std::vector<Edge>& edges,
                                  bool max_cardinality) {
        if (n_vertices == 0 || edges.empty()) return std::vector<int>(static_cast<size_t>(n_vertices), -1);
        MaxWeightMatching m(n_vertices, edges, max_cardinality);
        m.run();
        std::vector<int> mate(static_cast<size_t>(n_vertices), -1);
        for (int v = 0; v < n_vertices; ++v)
            if (m.mate_[v] >= 0) mate[v] = m.endpoint_[m.mate_[v]];
        return mate;
    }

private:
    MaxWeightMatching(int nvertex, const std::vector<Edge>& edges, bool maxcardinality)
        : nvertex_(nvertex), edges_(edges), maxcardinality_(maxcardinality) {
        nedge_ = static_cast<int>(edges_.size());
        maxweight_ = 0;
        for (const Edge& e : edges_) {
            if (e.i < 0 || e.j < 0 || e.i >= nvertex_ || e.j >= nvertex_ || e.i == e.j)
                throw std::invalid_argument("matching: bad edge");
            maxweight_ = std::max(maxweight_, e.weight);
        }
        endpoint_.resize(2 * static_cast<size_t>(nedge_));
        for (int p = 0; p < 2 * nedge_; ++p)
            endpoint_[p] = (p % 2 == 0) ? edges_[p / 2].i : edges_[p / 2].j;
        neighbend_.assign(static_cast<size_t>(nvertex_), {});
        for (int k = 0; k < nedge_; ++k) {
            neighbend_[edges_[k].i].push_back(2 * k + 1);
            neighbend_[edges_[k].j].push_back(2 * k);
        }
        mate_.assign(static_cast<size_t>(nvertex_), -1);
        label_.assign(2 * static_cast<size_t>(nvertex_), 0);
        labelend_.assign(2 * static_cast<size_t>(nvertex_), -1);
        inblossom_.resize(static_cast<size_t>(nvertex_));
        for (int v = 0; v < nvertex_; ++v) inblossom_[v] = v;
        blossomparent_.assign(2 * static_cast<size_t>(nvertex_), -1);
        blossomchilds_.assign(2 * static_cast<size_t>(nvertex_), {});
        blossombase_.resize(2 * static_cast<size_t>(nvertex_));
        for (int v = 0; v < nvertex_; ++v) blossombase_[v] = v;
        for (int b = nvertex_; b < 2 * nvertex_; ++b) blossombase_[b] = -1;
        blossomendps_.assign(2 * static_cast<size_t>(nvertex_), {});
        bestedge_.assign(2 * static_cast<size_t>(nvertex_), -1);
        blossombestedges_.assign(2 * static_cast<size_t>(nvertex_), {});
        for (int b = nvertex_; b < 2 * nvertex_; ++b) unusedblossoms_.push_back(b);
        dualvar_.assign(2 * static_cast<size_t>(nvertex_), 0);
        for (int v = 0; v < nvertex_; ++v) dualvar_[v] = maxweight_;
        allowedge_.assign(static_cast<size_t>(nedge_), false);
    }

    long long slack(int k) const {
        return dualvar_[edges_[k].i] + dualvar_[edges_[k].j] - 2 * edges_[k].weight;
    }

    void blossom_leaves(int b, std::vector<int>& out) const {
        if (b < nvertex_) {
            out.push_back(b);
        } else {
            for (int t : blossomchilds_[b]) blossom_leaves(t, out);
        }
    }

    void assign_label(int w, int t, int p) {
        int b = inblossom_[w];
        label_[w] = label_[b] = t;
        labelend_[w] = labelend_[b] = p;
        bestedge_[w] = bestedge_[b] = -1;
        if (t == 1) {
            std::vector<int> leaves;
            blossom_leaves(b, leaves);
            queue_.insert(queue_.end(), leaves.begin(), leaves.end());
        } else if (t == 2) {
            int base = blossombase_[b];
            assign_label(endpoint_[mate_[base]], 1, mate_[base] ^ 1);
        }
    }

    int scan_blossom(int v, int w) {
        std::vector<int> path;
        int base = -1;
        while (v != -1 || w != -1) {
            int b = inblossom_[v];
            if (label_[b] & 4) {
                base = blossombase_[b];
                break;
            }
            path.push_back(b);
            label_[b] |= 4;
            if (labelend_[b] == -1) {
                v = -1;
            } else {
                v = endpoint_[labelend_[b]];
                b = inblossom_[v];
                v = endpoint_[labelend_[b]];
            }
            if (w != -1) std::swap(v, w);
        }
        for (int b : path) label_[b] &= ~4;
        return base;
    }

    void add_blossom(int base, int k) {
        int v = edges_[k].i, w = edges_[k].j;
        int bb = inblossom_[base];
        int bv = inblossom_[v];
        int bw = inblossom_[w];
        int b = unusedblossoms_.back();
        unusedblossoms_.pop_back();
        blossombase_[b] = base;
        blossomparent_[b] = -1;
        blossomparent_[bb] = b;
        std::vector<int> path;
        std::vector<int> endps;
        while (bv != bb) {
            blossomparent_[bv] = b;
            path.push_back(bv);
            endps.push_back(labelend_[bv]);
            v = endpoint_[labelend_[bv]];
            bv = inblossom_[v];
        }
        path.push_back(bb);
        std::reverse(path.begin(), path.end());
        std::reverse(endps.begin(), endps.end());
        endps.push_back(2 * k);
        while (bw != bb) {
            blossomparent_[bw] = b;
            path.push_back(bw);
            endps.push_back(labelend_[bw] ^ 1);
            w = endpoint_[labelend_[bw]];
            bw = inblossom_[w];
        }
        blossomchilds_[b] = path;
        blossomendps_[b] = endps;
        label_[b] = 1;
        labelend_[b] = labelend_[bb];
        dualvar_[b] = 0;
        std::vector<int> leaves;
        blossom_leaves(b, leaves);
        for (int leaf : leaves) {
            if (label_[inblossom_[leaf]] == 2) queue_.push_back(leaf);
            inblossom_[leaf] = b;
        }
        // Recompute best edges to other S-blossoms.
        std::vector<long long> bestedgeto(2 * static_cast<size_t>(nvertex_), -1);
        std::vector<int> bestedgeto_k(2 * static_cast<size_t>(nvertex_), -1);
        for (int bv2 : path) {
            std::vector<std::vector<int>> nblists;
            if (blossombestedges_[bv2].empty()) {
                std::vector<int> lv;
                blossom_leaves(bv2, lv);
                for (int l : lv) {
                    std::vector<int> ks;
                    for (int p : neighbend_[l]) ks.push_back(p / 2);
                    nblists.push_back(std::move(ks));
                }
            } else {
                nblists.push_back(blossombestedges_[bv2]);
            }
            for (const auto& nblist : nblists) {
                for (int k2 : nblist) {
                    int i = edges_[k2].i, j = edges_[k2].j;
                    if (inblossom_[j] == b) std::swap(i, j);
                    int bj = inblossom_[j];
                    if (bj != b && label_[bj] == 1 &&
                        (bestedgeto_k[bj] == -1 || slack(k2) < bestedgeto[bj])) {
                        bestedgeto[bj] = slack(k2);
                        bestedgeto_k[bj] = k2;
                    }
                }
            }
            blossombestedges_[bv2].clear();
            bestedge_[bv2] = -1;
        }
        blossombestedges_[b].clear();
        for (int i = 0; i < 2 * nvertex_; ++i)
            if (bestedgeto_k[i] != -1) blossombestedges_[b].push_back(bestedgeto_k[i]);
        bestedge_[b] = -1;
        for (int k2 : blossombestedges_[b])
            if (bestedge_[b] == -1 || slack(k2) < slack(bestedge_[b])) bestedge_[b] = k2;
    }

    void expand_blossom(int b, bool endstage) {
        for (int s : blossomchilds_[b]) {
            blossomparent_[s] = -1;
            if (s < nvertex_) {
                inblossom_[s] = s;
            } else if (endstage && dualvar_[s] == 0) {
                expand_blossom(s, endstage);
            } else {
                std::vector<int> leaves;
                blossom_leaves(s, leaves);
                for (int v : leaves) inblossom_[v] = s;
            }
        }
        if (!endstage && label_[b] == 2) {
            int entrychild = inblossom_[endpoint_[labelend_[b] ^ 1]];
            int j = 0;
            for (size_t idx = 0; idx < blossomchilds_[b].size(); ++idx)
                if (blossomchilds_[b][idx] == entrychild) {
                    j = static_cast<int>(idx);
                    break;
                }
            int jstep, endptrick;
            if (j & 1) {
                j -= static_cast<int>(blossomchilds_[b].size());
                jstep = 1;
                endptrick = 0;
            } else {
                jstep = -1;
                endptrick = 1;
            }
            int p = labelend_[b];
            while (j != 0) {
                label_[endpoint_[p ^ 1]] = 0;
                int idx = ((j - endptrick) % static_cast<int>(blossomchilds_[b].size()) +
                           static_cast<int>(blossomchilds_[b].size())) %
                          static_cast<int>(blossomchilds_[b].size());
                label_[endpoint_[blossomendps_[b][idx] ^ endptrick ^ 1]] = 0;
                assign_label(endpoint_[p ^ 1], 2, p);
                allowedge_[blossomendps_[b][idx] / 2] = true;
                j += jstep;
                int idx2 = ((j - endptrick) % static_cast<int>(blossomchilds_[b].size()) +
                            static_cast<int>(blossomchilds_[b].size())) %
                           static_cast<int>(blossomchilds_[b].size());
                p = blossomendps_[b][idx2] ^ endptrick;
                allowedge_[p / 2] = true;
                j += jstep;
            }
            int bv = blossomchilds_[b][((j % static_cast<int>(blossomchilds_[b].size())) +
                                        static_cast<int>(blossomchilds_[b].size())) %
                                       static_cast<int>(blossomchilds_[b].size())];
            label_[endpoint_[p ^ 1]] = label_[bv] = 2;
            labelend_[endpoint_[p ^ 1]] = labelend_[bv] = p;
            bestedge_[bv] = -1;
            j += jstep;
            while (blossomchilds_[b][((j % static_cast<int>(blossomchilds_[b].size())) +
                                      static_cast<int>(blossomchilds_[b].size())) %
                                     static_cast<int>(blossomchilds_[b].size())] != entrychild) {
                int bv2 = blossomchilds_[b][((j % static_cast<int>(blossomchilds_[b].size())) +
                                             static_cast<int>(blossomchilds_[b].size())) %
                                            static_cast<int>(blossomchilds_[b].size())];
                if (label_[bv2] == 1) {
                    j += jstep;
                    continue;
                }
                std::vector<int> leaves;
                blossom_leaves(bv2, leaves);
                int v = -1;
                for (int lv : leaves)
                    if (label_[lv] != 0) {
                        v = lv;
                        break;
                    }
                if (v != -1) {
                    label_[v] = 0;
                    label_[endpoint_[mate_[blossombase_[bv2]]]] = 0;
                    assign_label(v, 2, labelend_[v]);
                }
                j += jstep;
            }
        }
        label_[b] = -1;
        labelend_[b] = -1;
        blossomchilds_[b].clear();
        blossomendps_[b].clear();
        blossombase_[b] = -1;
        blossombestedges_[b].clear();
        bestedge_[b] = -1;
        unusedblossoms_.push_back(b);
    }

    void augment_blossom(int b, int v) {
        int t = v;
        while (blossomparent_[t] != b) t = blossomparent_[t];
        if (t >= nvertex_) augment_blossom(t, v);
        int i = 0;
        for (size_t idx = 0; idx < blossomchilds_[b].size(); ++idx)
            if (blossomchilds_[b][idx] == t) {
                i = static_cast<int>(idx);
                break;
            }
        int j = i;
        int jstep, endptrick;
        int n = static_cast<int>(blossomchilds_[b].size());
        if (i & 1) {
            j -= n;
            jstep = 1;
            endptrick = 0;
        } else {
            jstep = -1;
            endptrick = 1;
        }
        while (j != 0) {
            j += jstep;
            int idx = ((j % n) + n) % n;
            int tt = blossomchilds_[b][idx];
            int p = blossomendps_[b][(((j - endptrick) % n) + n) % n] ^ endptrick;
            if (tt >= nvertex_) augment_blossom(tt, endpoint_[p]);
            j += jstep;
            int idx2 = ((j % n) + n) % n;
            tt = blossomchilds_[b][idx2];
            if (tt >= nvertex_) augment_blossom(tt, endpoint_[p ^ 1]);
            mate_[endpoint_[p]] = p ^ 1;
            mate_[endpoint_[p ^ 1]] = p;
        }
        std::vector<int> newchilds(blossomchilds_[b].begin() + i, blossomchilds_[b].end());
        newchilds.insert(newchilds.end(), blossomchilds_[b].begin(), blossomchilds_[b].begin() + i);
        blossomchilds_[b] = newchilds;
        std::vector<int> newendps(blossomendps_[b].begin() + i, blossomendps_[b].end());
        newendps.insert(newendps.end(), blossomendps_[b].begin(), blossomendps_[b].begin() + i);
        blossomendps_[b] = newendps;
        blossombase_[b] = blossombase_[blossomchilds_[b][0]];
    }

    void augment_matching(int k) {
        for (auto [s, p] : {std::pair<int, int>{edges_[k].i, 2 * k + 1},
                            std::pair<int, int>{edges_[k].j, 2 * k}}) {
            // Match s to remote endpoint p, then swap matched/unmatched edges
            // back along the alternating tree.
            while (true) {
                int bs = inblossom_[s];
                if (bs >= nvertex_) augment_blossom(bs, s);
                mate_[s] = p;
                if (labelend_[bs] == -1) break;  // reached a root
                int t = endpoint_[labelend_[bs]];
                int bt = inblossom_[t];
                s = endpoint_[labelend_[bt]];
                int j = endpoint_[labelend_[bt] ^ 1];
                if (bt >= nvertex_) augment_blossom(bt, j);
                mate_[j] = labelend_[bt];
                p = labelend_[bt] ^ 1;
            }
        }
    }

    void run() {
        for (int t = 0; t < nvertex_; ++t) {
            std::fill(label_.begin(), label_.end(), 0);
            std::fill(bestedge_.begin(), bestedge_.end(), -1);
            for (int b = nvertex_; b < 2 * nvertex_; ++b) blossombestedges_[b].clear();
            std::fill(allowedge_.begin(), allowedge_.end(), false);
            queue_.clear();
            for (int v = 0; v < nvertex_; ++v)
                if (mate_[v] == -1 && label_[inblossom_[v]] == 0) assign_label(v, 1, -1);
            bool augmented = false;
            while (true) {
                while (!queue_.empty() && !augmented) {
                    int v = queue_.back();
                    queue_.pop_back();
                    for (int p : neighbend_[v]) {
                        int k = p / 2;
                        int w = endpoint_[p];
                        if (inblossom_[v] == inblossom_[w]) continue;
                        long long kslack = 0;
                        if (!allowedge_[k]) {
                            kslack = slack(k);
                            if (kslack <= 0) allowedge_[k] = true;
                        }
                        if (allowedge_[k]) {
                            int lbw = label_[inblossom_[w]];
                            if (lbw == 0) {
                                // Free blossom: label it T and its mate S.
                                assign_label(w, 2, p ^ 1);
                            } else if (lbw == 1) {
                                // S-S edge: either a new blossom or an
                                // augmenting path between two trees.
                                int base = scan_blossom(v, w);
                                if (base >= 0) {
                                    add_blossom(base, k);
                                } else {
                                    augment_matching(k);
                                    augmented = true;
                                    break;
                                }
                            } else if (label_[w] == 0) {
                                // Inside a T-blossom; record the T label on
                                // the vertex itself without propagating.
                                label_[w] = 2;
                                labelend_[w] = p ^ 1;
                            }
                        } else if (label_[inblossom_[w]] == 1) {
                            int b = inblossom_[v];
                            if (bestedge_[b] == -1 || kslack < slack(bestedge_[b]))
                                bestedge_[b] = k;
                        } else if (label_[w] == 0) {
                            if (bestedge_[w] == -1 || kslack < slack(bestedge_[w]))
                                bestedge_[w] = k;
                        }
                    }
                }
                if (augmented) break;

                // Dual update: choose the minimum delta over the four types.
                int deltatype = -1;
                long long delta = 0;
                int deltaedge = -1, deltablossom = -1;
                if (!maxcardinality_) {
                    deltatype = 1;
                    delta = std::numeric_limits<long long>::max();
                    for (int v = 0; v < nvertex_; ++v) delta = std::min(delta, dualvar_[v]);
                }
                for (int v = 0; v < nvertex_; ++v) {
                    if (label_[inblossom_[v]] == 0 && bestedge_[v] != -1) {
                        long long d = slack(bestedge_[v]);
                        if (deltatype == -1 || d < delta) {
                            delta = d;
                            deltatype = 2;
                            deltaedge = bestedge_[v];
                        }
                    }
                }
                for (int b = 0; b < 2 * nvertex_; ++b) {
                    if (blossomparent_[b] == -1 && label_[b] == 1 && bestedge_[b] != -1) {
                        long long kslack = slack(bestedge_[b]);
                        long long d = kslack / 2;
                        if (deltatype == -1 || d < delta) {
                            delta = d;
                            deltatype = 3;
                            deltaedge = bestedge_[b];
                        }
                    }
                }
                for (int b = nvertex_; b < 2 * nvertex_; ++b) {
                    if (blossombase_[b] >= 0 && blossomparent_[b] == -1 && label_[b] == 2 &&
                        (deltatype == -1 || dualvar_[b] < delta)) {
                        delta = dualvar_[b];
                        deltatype = 4;
                        deltablossom = b;
                    }
                }
                if (deltatype == -1) {
                    // No further progress possible; the max-cardinality
                    // optimum is reached. Final delta keeps duals feasible.
                    deltatype = 1;
                    long long mind = std::numeric_limits<long long>::max();
                    for (int v = 0; v < nvertex_; ++v) mind = std::min(mind, dualvar_[v]);
                    delta = std::max(0LL, mind);
                }
                for (int v = 0; v < nvertex_; ++v) {
                    int lbl = label_[inblossom_[v]];
                    if (lbl == 1)
                        dualvar_[v] -= delta;
                    else if (lbl == 2)
                        dualvar_[v] += delta;
                }
                for (int b = nvertex_; b < 2 * nvertex_; ++b) {
                    if (blossombase_[b] >= 0 && blossomparent_[b] == -1) {
                        if (label_[b] == 1)
                            dualvar_[b] += delta;
                        else if (label_[b] == 2)
                            dualvar_[b] -= delta;
                    }
                }
                if (deltatype == 1) break;
                if (deltatype == 2) {
                    allowedge_[deltaedge] = true;
                    int i = edges_[deltaedge].i;
                    if (label_[inblossom_[i]] == 0) i = edges_[deltaedge].j;
                    queue_.push_back(i);
                } else if (deltatype == 3) {
                    allowedge_[deltaedge] = true;
                    queue_.push_back(edges_[deltaedge].i);
                } else if (deltatype == 4) {
                    expand_blossom(deltablossom, false);
                }
            }
            if (!augmented) break;
            for (int b = nvertex_; b < 2 * nvertex_; ++b)
                if (blossomparent_[b] == -1 && blossombase_[b] >= 0 && label_[b] == 1 &&
                    dualvar_[b] == 0)
                    expand_blossom(b, true);
        }
    }

    int nvertex_;
    std::vector<Edge> edges_;
    bool maxcardinality_;
    int nedge_;
    long long maxweight_;
    std::vector<int> endpoint_;
    std::vector<std::vector<int>> neighbend_;
    std::vector<int> mate_;
    std::vector<int> label_;
    std::vector<int> labelend_;
    std::vector<int> inblossom_;
    std::vector<int> blossomparent_;
    std::vector<std::vector<int>> blossomchilds_;
    std::vector<int> blossombase_;
    std::vector<std::vector<int>> blossomendps_;
    std::vector<int> bestedge_;
    std::vector<std::vector<int>> blossombestedges_;
    std::vector<int> unusedblossoms_;
    std::vector<long long> dualvar_;
    std::vector<bool> allowedge_;
    std::vector<int> queue_;
};

// Minimum-weight perfect matching over a complete graph given a dense
// distance matrix. Transforms to a maximum-weight problem; the matching is
// forced perfect via max-cardinality mode.
inline std::vector<int> min_weight_perfect_matching(const std::vector<std::vector<long long>>& dist) {
    int n = static_cast<int>(dist.size());
    if (n % 2 != 0) throw std::invalid_argument("perfect matching needs an even vertex count");
    if (n == 0) return {};
    long long maxd = 0;
    for (const auto& row : dist)
        for (long long d : row) maxd = std::max(maxd, d);
    std::vector<MaxWeightMatching::Edge> edges;
    edges.reserve(static_cast<size_t>(n) * (n - 1) / 2);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            edges.push_back({i, j, maxd + 1 - dist[i][j]});
    std::vector<int> mate = MaxWeightMatching::solve(n, edges, true);
    for (int v = 0; v < n; ++v)
        if (mate[v] < 0) throw std::logic_error("perfect matching not found on complete graph");
    return mate;
}

}  // namespace fbsim
