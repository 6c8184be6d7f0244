#include "fitevo/population.hpp"

#include <charconv>
#include <ostream>
#include <string>

#include "fitevo/errors.hpp"

namespace fitevo {

std::int32_t FitnessStore::make_node(double key, Count count) {
  // xorshift32 for treap priorities; independent of the simulation stream.
  prio_state_ ^= prio_state_ << 13;
  prio_state_ ^= prio_state_ >> 17;
  prio_state_ ^= prio_state_ << 5;
  Node node{key, count, count, prio_state_, -1, -1};
  ++live_;
  if (!free_.empty()) {
    std::int32_t t = free_.back();
    free_.pop_back();
    nodes_[t] = node;
    return t;
  }
  nodes_.push_back(node);
  return static_cast<std::int32_t>(nodes_.size() - 1);
}

void FitnessStore::release(std::int32_t t) {
  free_.push_back(t);
  --live_;
}

void FitnessStore::pull(std::int32_t t) {
  Node& n = nodes_[t];
  n.sum = n.count + sum_of(n.left) + sum_of(n.right);
}

std::int32_t FitnessStore::insert(std::int32_t t, double key, Count count) {
  if (t < 0) return make_node(key, count);
  if (key == nodes_[t].key) {
    nodes_[t].count += count;
    nodes_[t].sum += count;
    return t;
  }
  if (key < nodes_[t].key) {
    const std::int32_t child = insert(nodes_[t].left, key, count);
    nodes_[t].left = child;
    if (nodes_[child].priority > nodes_[t].priority) {
      nodes_[t].left = nodes_[child].right;
      nodes_[child].right = t;
      pull(t);
      pull(child);
      return child;
    }
  } else {
    const std::int32_t child = insert(nodes_[t].right, key, count);
    nodes_[t].right = child;
    if (nodes_[child].priority > nodes_[t].priority) {
      nodes_[t].right = nodes_[child].left;
      nodes_[child].left = t;
      pull(t);
      pull(child);
      return child;
    }
  }
  pull(t);
  return t;
}

void FitnessStore::add(double key, Count count) {
  if (count <= 0) return;
  root_ = insert(root_, key, count);
}

Count FitnessStore::prefix(double key, bool inclusive) const {
  Count acc = 0;
  std::int32_t t = root_;
  while (t >= 0) {
    const Node& n = nodes_[t];
    if (n.key < key || (inclusive && n.key == key)) {
      acc += sum_of(n.left) + n.count;
      t = n.right;
    } else {
      t = n.left;
    }
  }
  return acc;
}

Count FitnessStore::count_at(double key) const {
  std::int32_t t = root_;
  while (t >= 0) {
    const Node& n = nodes_[t];
    if (key == n.key) return n.count;
    t = key < n.key ? n.left : n.right;
  }
  return 0;
}

void FitnessStore::split(std::int32_t t, double key, std::int32_t& less,
                         std::int32_t& rest) {
  if (t < 0) {
    less = rest = -1;
    return;
  }
  if (nodes_[t].key < key) {
    std::int32_t l = -1;
    std::int32_t r = -1;
    split(nodes_[t].right, key, l, r);
    nodes_[t].right = l;
    pull(t);
    less = t;
    rest = r;
  } else {
    std::int32_t l = -1;
    std::int32_t r = -1;
    split(nodes_[t].left, key, l, r);
    nodes_[t].left = r;
    pull(t);
    less = l;
    rest = t;
  }
}

std::int32_t FitnessStore::decrement_min(std::int32_t t, Count count) {
  if (nodes_[t].left >= 0) {
    nodes_[t].left = decrement_min(nodes_[t].left, count);
    pull(t);
    return t;
  }
  nodes_[t].count -= count;
  if (nodes_[t].count == 0) {
    const std::int32_t right = nodes_[t].right;
    release(t);
    return right;
  }
  pull(t);
  return t;
}

void FitnessStore::collect(std::int32_t t, std::vector<FitnessCount>& out) {
  std::vector<std::int32_t> stack;
  while (t >= 0 || !stack.empty()) {
    while (t >= 0) {
      stack.push_back(t);
      t = nodes_[t].left;
    }
    t = stack.back();
    stack.pop_back();
    out.push_back({nodes_[t].key, nodes_[t].count});
    const std::int32_t next = nodes_[t].right;
    release(t);
    t = next;
  }
}

FitnessCount FitnessStore::remove_smallest(Count y,
                                           std::vector<FitnessCount>& drained) {
  // Locate x+, the first key whose inclusive prefix count reaches y.
  Count remaining = y;
  std::int32_t t = root_;
  double boundary = 0.0;
  while (t >= 0) {
    const Node& n = nodes_[t];
    const Count left = sum_of(n.left);
    if (remaining <= left) {
      t = n.left;
    } else if (remaining <= left + n.count) {
      boundary = n.key;
      remaining -= left;
      break;
    } else {
      remaining -= left + n.count;
      t = n.right;
    }
  }
  std::int32_t less = -1;
  std::int32_t rest = -1;
  split(root_, boundary, less, rest);
  collect(less, drained);
  root_ = rest;
  // `remaining` individuals come off the boundary key itself.
  const Count at_boundary = count_at(boundary);
  root_ = decrement_min(root_, remaining);
  if (remaining == at_boundary) {
    drained.push_back({boundary, remaining});
    return {boundary, 0};
  }
  return {boundary, remaining};
}

void FitnessStore::drain_all(std::vector<FitnessCount>& drained) {
  collect(root_, drained);
  root_ = -1;
}

void Population::birth_step(std::span<const double> fitness) {
  if (step_ % 2 != 0) {
    throw SequencingError("birth step requested at odd step " +
                          std::to_string(step_));
  }
  for (double f : fitness) store_.add(f, 1);
  ++step_;
}

void Population::birth_step(std::span<const FitnessCount> batch) {
  if (step_ % 2 != 0) {
    throw SequencingError("birth step requested at odd step " +
                          std::to_string(step_));
  }
  for (const FitnessCount& e : batch) store_.add(e.fitness, e.count);
  ++step_;
}

KillReport Population::death_step(Count y) {
  if (step_ % 2 == 0) {
    throw SequencingError("death step requested at even step " +
                          std::to_string(step_));
  }
  if (y < 0) throw DomainError("negative death count");
  KillReport report;
  report.requested = y;
  const Count total = store_.total();
  if (y >= total) {
    store_.drain_all(report.removed);
    report.shortfall = y - total;
  } else if (y > 0) {
    const FitnessCount partial = store_.remove_smallest(y, report.removed);
    if (partial.count > 0) {
      report.removed.push_back(partial);
      report.boundary_removed = partial.count;
    }
  }
  ++step_;
  return report;
}

Count Population::count_in(const BorelSet& set) const {
  Count acc = 0;
  for (const Interval& c : set.components()) {
    acc += store_.prefix(c.hi, c.hi_closed) - store_.prefix(c.lo, !c.lo_closed);
  }
  return acc;
}

std::vector<FitnessCount> Population::entries() const {
  std::vector<FitnessCount> out;
  out.reserve(store_.key_count());
  store_.for_each([&](double key, Count count) { out.push_back({key, count}); });
  return out;
}

std::vector<CdfStep> Population::empirical_cdf() const {
  const Count total = store_.total();
  if (total == 0) throw EmptyPopulationError("empirical CDF of an empty population");
  std::vector<CdfStep> out;
  out.reserve(store_.key_count());
  Count acc = 0;
  const double denom = static_cast<double>(total);
  store_.for_each([&](double key, Count count) {
    acc += count;
    out.push_back({key, acc == total ? 1.0 : static_cast<double>(acc) / denom});
  });
  return out;
}

void Population::write_snapshot(std::ostream& os) const {
  os << "# step=" << step_ << " total=" << store_.total() << "\n";
  char buf[64];
  store_.for_each([&](double key, Count count) {
    auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), key);
    os.write(buf, end - buf);
    os << "," << count << "\n";
  });
}

}  // namespace fitevo
