#include "fitevo/borel_set.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>

#include "fitevo/errors.hpp"

namespace fitevo {

namespace {

bool disjoint_ordered(const Interval& a, const Interval& b) {
  if (a.hi < b.lo) return true;
  return a.hi == b.lo && !(a.hi_closed && b.lo_closed);
}

std::string format_number(double x) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, end);
}

double parse_number(std::string_view text, std::string_view whole) {
  while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
  while (!text.empty() && text.back() == ' ') text.remove_suffix(1);
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw InvalidInput("bad number in set '" + std::string(whole) + "'");
  }
  return v;
}

}  // namespace

BorelSet::BorelSet(std::vector<Interval> components)
    : components_(std::move(components)) {
  for (std::size_t i = 0; i < components_.size(); ++i) {
    const Interval& c = components_[i];
    if (c.is_empty()) throw InvalidInput("empty interval component in set");
    if (c.lo < 0.0 || c.hi > 1.0) {
      throw InvalidInput("set component outside [0,1]");
    }
    if (i > 0 && !disjoint_ordered(components_[i - 1], c)) {
      throw InvalidInput("set components must be sorted and disjoint");
    }
  }
}

BorelSet BorelSet::closed(double lo, double hi) {
  return interval(lo, hi, true, true);
}

BorelSet BorelSet::singleton(double x) { return interval(x, x, true, true); }

BorelSet BorelSet::interval(double lo, double hi, bool lo_closed,
                            bool hi_closed) {
  Interval c{lo, hi, lo_closed, hi_closed};
  if (c.is_empty()) return BorelSet();
  return BorelSet({c});
}

BorelSet BorelSet::left(double f, bool include_f) {
  return interval(0.0, f, true, include_f);
}

BorelSet BorelSet::parse(std::string_view text) {
  const std::string_view whole = text;
  std::vector<Interval> parts;
  auto trim = [](std::string_view s) {
    while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
    while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
    return s;
  };
  text = trim(text);
  if (text.empty() || text == "{}" || text == "empty") return BorelSet();
  while (!text.empty()) {
    std::size_t end = text.find('U');
    std::string_view piece = trim(text.substr(0, end));
    text = end == std::string_view::npos ? std::string_view{}
                                         : text.substr(end + 1);
    if (piece.size() < 3) {
      throw InvalidInput("bad set syntax '" + std::string(whole) + "'");
    }
    const char open = piece.front();
    const char close = piece.back();
    std::string_view body = piece.substr(1, piece.size() - 2);
    if (open == '{' && close == '}') {
      double x = parse_number(body, whole);
      parts.push_back({x, x, true, true});
      continue;
    }
    if ((open != '[' && open != '(') || (close != ']' && close != ')')) {
      throw InvalidInput("bad set syntax '" + std::string(whole) + "'");
    }
    std::size_t comma = body.find(',');
    if (comma == std::string_view::npos) {
      throw InvalidInput("bad set syntax '" + std::string(whole) + "'");
    }
    Interval c{parse_number(body.substr(0, comma), whole),
               parse_number(body.substr(comma + 1), whole), open == '[',
               close == ']'};
    if (c.is_empty()) continue;
    parts.push_back(c);
  }
  return BorelSet(std::move(parts));
}

bool BorelSet::contains(double x) const {
  // First component whose upper end is not below x.
  auto it = std::lower_bound(
      components_.begin(), components_.end(), x,
      [](const Interval& c, double v) { return c.hi < v; });
  for (; it != components_.end() && it->lo <= x; ++it) {
    if (it->contains(x)) return true;
  }
  return false;
}

BorelSet BorelSet::intersect(const Interval& other) const {
  std::vector<Interval> out;
  for (const Interval& c : components_) {
    Interval r;
    if (c.lo > other.lo) {
      r.lo = c.lo;
      r.lo_closed = c.lo_closed;
    } else if (c.lo < other.lo) {
      r.lo = other.lo;
      r.lo_closed = other.lo_closed;
    } else {
      r.lo = c.lo;
      r.lo_closed = c.lo_closed && other.lo_closed;
    }
    if (c.hi < other.hi) {
      r.hi = c.hi;
      r.hi_closed = c.hi_closed;
    } else if (c.hi > other.hi) {
      r.hi = other.hi;
      r.hi_closed = other.hi_closed;
    } else {
      r.hi = c.hi;
      r.hi_closed = c.hi_closed && other.hi_closed;
    }
    if (!r.is_empty()) out.push_back(r);
  }
  BorelSet result;
  result.components_ = std::move(out);
  return result;
}

std::string BorelSet::to_string() const {
  if (components_.empty()) return "{}";
  std::ostringstream os;
  for (std::size_t i = 0; i < components_.size(); ++i) {
    const Interval& c = components_[i];
    if (i > 0) os << "U";
    if (c.lo == c.hi) {
      os << "{" << format_number(c.lo) << "}";
    } else {
      os << (c.lo_closed ? '[' : '(') << format_number(c.lo) << ","
         << format_number(c.hi) << (c.hi_closed ? ']' : ')');
    }
  }
  return os.str();
}

}  // namespace fitevo
