#include "acquire/embedding.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>

namespace acquire {

std::string to_string(EmbedError::Kind k) {
  switch (k) {
    case EmbedError::Kind::Error1: return "Error1";
    case EmbedError::Kind::Error2: return "Error2";
    case EmbedError::Kind::Error3: return "Error3";
  }
  return "Unknown";
}

namespace {

using NodeId = TrimmedTree::NodeId;

struct Local {
  VertexId vertex;
  double s;
  double t;
  double alpha;
};

struct WorkItem {
  double alpha_lo;
  double alpha_hi;
  double top;
  std::size_t level;
  std::vector<NodeId> family;
  std::vector<std::uint32_t> verts;  // indices into the Local array
};

class Embedder {
 public:
  Embedder(const TessellationPlan& plan, std::size_t square, Triangle tri,
           const GeometricGraph& g, const EmbedOptions& options)
      : plan_(plan), g_(g), options_(options) {
    out_.triangle = tri;
    out_.square = square;
    out_.z_lower = plan.z_lower;
    out_.z_upper = plan.z_upper;
    const Point center = plan.square_center(square);
    for (VertexId v : plan.square_members(square)) {
      const Point p = g.point(v);
      if (triangle_of(center, p) != tri) continue;
      const LocalPoint lp = to_local(tri, center, p);
      locals_.push_back({v, lp.s, lp.t, lp.t > 0.0 ? lp.s / lp.t : 0.0});
    }
    out_.z = locals_.size();
    if (options.aux_spacing > 0.0) {
      spacing_ = options.aux_spacing;
      levels_ = std::max<std::size_t>(
          1, static_cast<std::size_t>(std::ceil(plan.large_side / 2.0 / spacing_)));
    } else {
      levels_ = plan.ell / 20;
      spacing_ = 10.0 * plan.y * plan.r;
    }
    for (std::size_t i = 0; i <= levels_; ++i) out_.aux_lines.push_back(aux_depth(i));
    out_.diagnostics.edge_length_bound = 50.0 * plan.y * plan.r + plan.r / 3.0;
  }

  EmbedResult run() {
    if (locals_.empty()) return std::move(out_);
    const std::size_t z = locals_.size();
    const auto d = static_cast<std::uint32_t>(std::bit_width(z - 1));
    tree_ = trim(d, z);
    assignment_.assign(z, UINT32_MAX);

    std::vector<std::uint32_t> order(z);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
      return by_depth(a, b);
    });
    std::uint32_t root = 0;
    for (std::uint32_t j = 1; j < z; ++j) {
      if (sq_norm(locals_[j]) < sq_norm(locals_[root])) root = j;
    }
    if (root != order.front()) {
      out_.diagnostics.root_relocated = true;
      root = order.front();
    }
    assignment_[0] = locals_[root].vertex;
    if (z == 1) return finish();

    WorkItem first;
    first.alpha_lo = -1.0;
    first.alpha_hi = 1.0;
    first.top = (locals_[order[0]].t + locals_[order[1]].t) / 2.0;
    first.level = 1;
    first.family = tree_->node(0).children;
    first.verts.assign(order.begin() + 1, order.end());
    stack_.push_back(std::move(first));

    while (!stack_.empty()) {
      WorkItem item = std::move(stack_.back());
      stack_.pop_back();
      if (auto err = process(std::move(item))) return *err;
    }
    return finish();
  }

 private:
  double aux_depth(std::size_t i) const {
    if (i >= levels_) return plan_.large_side / 2.0;
    return spacing_ * static_cast<double>(i);
  }
  static double sq_norm(const Local& l) { return l.s * l.s + l.t * l.t; }
  bool by_depth(std::uint32_t a, std::uint32_t b) const {
    if (locals_[a].t != locals_[b].t) return locals_[a].t < locals_[b].t;
    return locals_[a].vertex < locals_[b].vertex;
  }
  bool by_angle(std::uint32_t a, std::uint32_t b) const {
    if (locals_[a].alpha != locals_[b].alpha) return locals_[a].alpha < locals_[b].alpha;
    return locals_[a].vertex < locals_[b].vertex;
  }

  std::optional<EmbedError> process(WorkItem item) {
    const std::size_t region_id = out_.regions.size();
    const double depth = aux_depth(item.level);
    const double width = (item.alpha_hi - item.alpha_lo) * depth;
    const double r = plan_.r;
    RegionRecord rec{region_id, item.level, item.alpha_lo, item.alpha_hi, item.top,
                     item.verts.size(), 0, false, std::nullopt};

    if (width > r / 3.0) {
      if (item.family.size() >= 2) {
        rec.split = true;
        out_.regions.push_back(rec);
        return split(std::move(item), region_id, depth);
      }
      if (!options_.pack_unsplittable) {
        out_.regions.push_back(rec);
        return EmbedError{EmbedError::Kind::Error1, region_id, item.level, 0.0, 0.0,
                          "single rooted tree in a region wider than r/3"};
      }
      ++out_.diagnostics.unsplittable_packs;
    }
    return pack(std::move(item), std::move(rec), depth);
  }

  std::optional<EmbedError> split(WorkItem item, std::size_t region_id, double depth) {
    std::vector<NodeId> fam = item.family;
    std::sort(fam.begin(), fam.end(), [&](NodeId a, NodeId b) {
      const auto sa = tree_->node(a).subtree_size, sb = tree_->node(b).subtree_size;
      return sa != sb ? sa > sb : a < b;
    });
    std::vector<NodeId> left, right;
    std::size_t left_total = 0, right_total = 0;
    for (NodeId f : fam) {
      const std::size_t s = tree_->node(f).subtree_size;
      if (left_total <= right_total) {
        left.push_back(f);
        left_total += s;
      } else {
        right.push_back(f);
        right_total += s;
      }
    }
    std::sort(item.verts.begin(), item.verts.end(),
              [&](std::uint32_t a, std::uint32_t b) { return by_angle(a, b); });
    const double alpha_b =
        (locals_[item.verts[left_total - 1]].alpha + locals_[item.verts[left_total]].alpha) / 2.0;
    const double w1 = (alpha_b - item.alpha_lo) * depth;
    const double w2 = (item.alpha_hi - alpha_b) * depth;
    const double r = plan_.r;

    auto& diag = out_.diagnostics;
    ++diag.splits;
    const double q = static_cast<double>(item.verts.size());
    const double balance = static_cast<double>(std::min(left_total, right_total)) / q;
    diag.min_split_balance = std::min(diag.min_split_balance, balance);
    if (balance < 0.25) ++diag.splits_below_quarter;

    const double narrow = std::min(w1, w2);
    if (narrow < r / 20.0) {
      return EmbedError{EmbedError::Kind::Error1, region_id, item.level, narrow, 0.0,
                        "sub-interval narrower than r/20"};
    }
    const double wide = std::max(w1, w2);
    if (wide > r / 3.0 && !options_.resplit_wide_subregions) {
      return EmbedError{EmbedError::Kind::Error1, region_id, item.level, wide, 0.0,
                        "sub-interval wider than r/3"};
    }

    WorkItem a{item.alpha_lo, alpha_b, item.top, item.level, std::move(left), {}};
    WorkItem b{alpha_b, item.alpha_hi, item.top, item.level, std::move(right), {}};
    a.verts.assign(item.verts.begin(), item.verts.begin() + static_cast<long>(left_total));
    b.verts.assign(item.verts.begin() + static_cast<long>(left_total), item.verts.end());
    // Right half is pushed first so the left one is processed first.
    stack_.push_back(std::move(b));
    stack_.push_back(std::move(a));
    return std::nullopt;
  }

  std::optional<EmbedError> pack(WorkItem item, RegionRecord rec, double depth) {
    const std::size_t q = item.verts.size();
    std::size_t r_i = q;
    if (item.level < levels_) {
      r_i = static_cast<std::size_t>(std::count_if(
          item.verts.begin(), item.verts.end(),
          [&](std::uint32_t j) { return locals_[j].t < depth; }));
    }
    rec.r = r_i;
    const std::size_t level_count = options_.strict_level_check
                                        ? tree_->level_counts()[item.level]
                                        : item.family.size();
    if (level_count > r_i || item.family.size() > r_i) {
      out_.regions.push_back(rec);
      return EmbedError{EmbedError::Kind::Error2, rec.id, item.level, static_cast<double>(r_i),
                        static_cast<double>(std::max(level_count, item.family.size())),
                        "level count exceeds vertices above the auxiliary line"};
    }

    std::vector<NodeId> selected = item.family;
    std::size_t total = item.family.size();
    std::vector<NodeId> children;
    for (NodeId f : item.family) {
      const auto& ch = tree_->node(f).children;
      children.insert(children.end(), ch.begin(), ch.end());
    }
    std::sort(children.begin(), children.end(), [&](NodeId a, NodeId b) {
      const auto sa = tree_->node(a).subtree_size, sb = tree_->node(b).subtree_size;
      return sa != sb ? sa < sb : a < b;
    });
    std::size_t taken = 0;
    for (; taken < children.size(); ++taken) {
      const std::size_t s = tree_->node(children[taken]).subtree_size;
      if (total + s > r_i) break;
      total += s;
      for (NodeId u : tree_->subtree(children[taken])) selected.push_back(u);
    }
    if (2 * total < r_i) ++out_.diagnostics.packings_below_half;

    std::sort(selected.begin(), selected.end());
    std::sort(item.verts.begin(), item.verts.end(),
              [&](std::uint32_t a, std::uint32_t b) { return by_depth(a, b); });
    for (std::size_t i = 0; i < selected.size(); ++i) {
      assignment_[selected[i]] = locals_[item.verts[i]].vertex;
    }

    auto& diag = out_.diagnostics;
    for (NodeId u : selected) {
      const NodeId parent = tree_->node(u).parent;
      const double len = std::sqrt(squared_distance(g_.point(assignment_[u]),
                                                    g_.point(assignment_[parent])));
      diag.max_edge_length = std::max(diag.max_edge_length, len);
      if (len > diag.edge_length_bound) ++diag.edges_over_bound;
      if (squared_distance(g_.point(assignment_[u]), g_.point(assignment_[parent])) >
          g_.radius_squared()) {
        out_.regions.push_back(rec);
        return EmbedError{EmbedError::Kind::Error3, rec.id, item.level, len, 0.0,
                          "embedded tree edge longer than r"};
      }
    }

    if (taken < children.size()) {
      const double last = locals_[item.verts[selected.size() - 1]].t;
      const double next = locals_[item.verts[selected.size()]].t;
      const double sep = (last + next) / 2.0;
      rec.separator = sep;
      if (item.level >= 4) {
        const double gap = aux_depth(item.level - 4) - sep;
        diag.worst_separator_lag = std::max(diag.worst_separator_lag, gap);
        if (gap > 0.0) ++diag.separators_lagging;
      }
      WorkItem next_item{item.alpha_lo, item.alpha_hi, sep, item.level + 1,
                         std::vector<NodeId>(children.begin() + static_cast<long>(taken),
                                             children.end()),
                         std::vector<std::uint32_t>(
                             item.verts.begin() + static_cast<long>(selected.size()),
                             item.verts.end())};
      stack_.push_back(std::move(next_item));
    }
    out_.regions.push_back(rec);
    return std::nullopt;
  }

  EmbedResult finish() {
    const Protocol tree_moves = extract_protocol(*tree_);
    out_.protocol.moves.reserve(tree_moves.moves.size());
    for (const Move& m : tree_moves.moves) {
      out_.protocol.moves.push_back({assignment_[m.src], assignment_[m.dst]});
    }
    out_.root = assignment_[0];
    out_.assignment = std::move(assignment_);
    out_.tree = std::move(tree_);
    return std::move(out_);
  }

  const TessellationPlan& plan_;
  const GeometricGraph& g_;
  EmbedOptions options_;
  std::vector<Local> locals_;
  std::size_t levels_ = 0;
  double spacing_ = 0;
  std::optional<TrimmedTree> tree_;
  std::vector<VertexId> assignment_;
  std::vector<WorkItem> stack_;
  TriangleEmbedding out_;
};

}  // namespace

EmbedResult embed_triangle(const TessellationPlan& plan, std::size_t square, Triangle tri,
                           const GeometricGraph& g, const EmbedOptions& options) {
  return Embedder(plan, square, tri, g, options).run();
}

}  // namespace acquire
