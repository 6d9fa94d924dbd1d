#include "sparsebell/carleson_seq.hpp"

#include <algorithm>
#include <json.hpp>
#include <random>
#include <sstream>

#include "sparsebell/errors.hpp"

namespace sparsebell {

namespace {

constexpr std::string_view kFormatTag = "carleson-seq/1";

std::uint64_t node_count(unsigned depth) { return (std::uint64_t{1} << (depth + 1)) - 1; }

// A(K) scaled to denominator 2^depth, i.e. mass(K) * 2^K.level.
std::uint64_t scaled_average(const CarlesonSeq& seq, NodeAddress k) {
  return seq.subtree_mass(k) << k.level;
}

void collect_maximal_below(const CarlesonSeq& seq, NodeAddress j, std::vector<NodeAddress>& out) {
  if (j.level >= seq.depth()) return;
  std::vector<NodeAddress> stack;
  const auto [l, r] = children(j);
  stack.push_back(r);
  stack.push_back(l);
  while (!stack.empty()) {
    const NodeAddress k = stack.back();
    stack.pop_back();
    if (seq.subtree_mass(k) == 0) continue;
    if (seq.is_selected(k)) {
      out.push_back(k);
      continue;
    }
    if (k.level < seq.depth()) {
      const auto [kl, kr] = children(k);
      stack.push_back(kr);
      stack.push_back(kl);
    }
  }
}

std::pair<std::size_t, std::size_t> line_and_column(std::string_view text, std::size_t byte) {
  std::size_t line = 1;
  std::size_t column = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return {line, column};
}

}  // namespace

CarlesonSeq::CarlesonSeq(unsigned depth, std::vector<NodeAddress> selected)
    : depth_(depth), selected_(std::move(selected)) {
  if (depth_ > kMaxDepth) {
    throw ContractError("sequence depth " + std::to_string(depth_) + " exceeds the maximum " +
                        std::to_string(kMaxDepth));
  }
  for (const NodeAddress a : selected_) {
    require_valid(a);
    if (a.level > depth_) {
      std::ostringstream os;
      os << "selected address " << a << " lies below depth " << depth_;
      throw ContractError(os.str());
    }
  }
  std::sort(selected_.begin(), selected_.end());
  selected_.erase(std::unique(selected_.begin(), selected_.end()), selected_.end());

  flags_.assign(node_count(depth_), 0);
  mass_.assign(node_count(depth_), 0);
  for (const NodeAddress a : selected_) {
    flags_[heap_index(a)] = 1;
    mass_[heap_index(a)] = std::uint64_t{1} << (depth_ - a.level);
  }
  // Bottom-up: heap children of node i sit at 2i+1 and 2i+2.
  for (std::uint64_t i = node_count(depth_); i-- > 0;) {
    const std::uint64_t left = 2 * i + 1;
    if (left < mass_.size()) mass_[i] += mass_[left] + mass_[left + 1];
  }
}

bool CarlesonSeq::is_selected(NodeAddress a) const {
  if (!is_valid(a) || a.level > depth_) return false;
  return flags_[heap_index(a)] != 0;
}

std::uint64_t CarlesonSeq::subtree_mass(NodeAddress j) const {
  if (!is_valid(j) || j.level > depth_) return 0;
  return mass_[heap_index(j)];
}

DyadicRational CarlesonSeq::carleson_average(NodeAddress j) const {
  require_valid(j);
  if (j.level > depth_) return {};
  return {BigInt(static_cast<unsigned long>(subtree_mass(j))), depth_ - j.level};
}

CarlesonBound carleson_constant(const CarlesonSeq& seq) {
  CarlesonBound out{DyadicRational{}, NodeAddress::root()};
  std::uint64_t best = 0;
  for (const NodeAddress k : seq.selected()) {
    const std::uint64_t v = scaled_average(seq, k);
    if (v > best) {
      best = v;
      out.witness = k;
    }
  }
  out.constant = DyadicRational(BigInt(static_cast<unsigned long>(best)), seq.depth());
  return out;
}

ValidationReport validate(const CarlesonSeq& seq, const GeneralRational& C) {
  const CarlesonBound bound = carleson_constant(seq);
  ValidationReport report;
  report.carleson_constant = bound.constant;
  report.average_at_root = seq.carleson_average(NodeAddress::root());
  report.is_C_carleson = compare(bound.constant, C) <= 0;
  report.worst_witness = bound.witness;
  return report;
}

std::vector<NodeAddress> alpha_children(const CarlesonSeq& seq, NodeAddress j) {
  require_valid(j);
  std::vector<NodeAddress> out;
  collect_maximal_below(seq, j, out);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::vector<NodeAddress>> sparse_generations(const CarlesonSeq& seq) {
  std::vector<std::vector<NodeAddress>> generations;
  std::vector<NodeAddress> current;
  if (seq.is_selected(NodeAddress::root())) {
    current.push_back(NodeAddress::root());
  } else {
    current = alpha_children(seq, NodeAddress::root());
  }
  while (!current.empty()) {
    std::vector<NodeAddress> next;
    for (const NodeAddress k : current) collect_maximal_below(seq, k, next);
    std::sort(next.begin(), next.end());
    generations.push_back(std::move(current));
    current = std::move(next);
  }
  return generations;
}

DyadicRational generation_measure(const CarlesonSeq& seq, unsigned m) {
  const auto generations = sparse_generations(seq);
  if (m >= generations.size()) return {};
  std::uint64_t total = 0;
  for (const NodeAddress k : generations[m]) total += std::uint64_t{1} << (seq.depth() - k.level);
  return {BigInt(static_cast<unsigned long>(total)), seq.depth()};
}

unsigned height_at(const CarlesonSeq& seq, NodeAddress leaf) {
  require_valid(leaf);
  if (leaf.level != seq.depth()) {
    throw ContractError("height_at expects a leaf at level " + std::to_string(seq.depth()) +
                        ", got level " + std::to_string(leaf.level));
  }
  unsigned h = 0;
  NodeAddress a = leaf;
  while (true) {
    if (seq.is_selected(a)) ++h;
    if (a.level == 0) break;
    a = parent(a);
  }
  return h;
}

DyadicRational level_set_measure(const CarlesonSeq& seq, const GeneralRational& lambda) {
  if (lambda.sign() <= 0) return DyadicRational(1);
  const BigInt m = lambda.ceil();
  // Heights never exceed depth + 1.
  if (m > seq.depth() + 1) return {};
  return generation_measure(seq, static_cast<unsigned>(m.get_ui() - 1));
}

CarlesonSeq truncate(const CarlesonSeq& seq, unsigned n) {
  if (n > seq.depth()) {
    throw ContractError("cannot truncate a depth-" + std::to_string(seq.depth()) +
                        " sequence at level " + std::to_string(n));
  }
  std::vector<NodeAddress> kept;
  for (const NodeAddress a : seq.selected()) {
    if (a.level < n) kept.push_back(a);
  }
  return {n, std::move(kept)};
}

CarlesonSeq random_carleson(unsigned depth, const GeneralRational& C, std::uint64_t seed) {
  if (C < GeneralRational(1)) throw ContractError("random_carleson requires C >= 1");
  if (depth > CarlesonSeq::kMaxDepth) {
    throw ContractError("random_carleson depth exceeds " + std::to_string(CarlesonSeq::kMaxDepth));
  }

  // A(J) <= C  <=>  mass(J) * 2^J.level <= floor(C * 2^depth), all integers.
  const std::uint64_t full = std::uint64_t{depth + 1} << depth;
  const BigInt cap_big = (C * GeneralRational(std::uint64_t{1} << depth)).floor();
  const std::uint64_t cap = cap_big >= full ? full : cap_big.get_ui();

  std::mt19937_64 rng(seed);
  // Per-sequence density in [4, 67] / 128 so the corpus mixes sparse and dense trees.
  const std::uint64_t density = 4 + rng() % 64;

  std::vector<std::uint64_t> mass(node_count(depth), 0);
  std::vector<NodeAddress> selected;
  for (std::uint32_t level = 0; level <= depth; ++level) {
    const std::uint64_t width = std::uint64_t{1} << level;
    const std::uint64_t weight = std::uint64_t{1} << (depth - level);
    for (std::uint64_t index = 0; index < width; ++index) {
      if (rng() % 128 >= density) continue;
      NodeAddress a{level, index};
      bool fits = true;
      for (NodeAddress j = a;; j = parent(j)) {
        if ((mass[heap_index(j)] + weight) << j.level > cap) {
          fits = false;
          break;
        }
        if (j.level == 0) break;
      }
      if (!fits) continue;
      for (NodeAddress j = a;; j = parent(j)) {
        mass[heap_index(j)] += weight;
        if (j.level == 0) break;
      }
      selected.push_back(a);
    }
  }
  return {depth, std::move(selected)};
}

std::string to_json(const CarlesonSeq& seq) {
  std::string out = "{\"format\": \"";
  out += kFormatTag;
  out += "\", \"depth\": " + std::to_string(seq.depth()) + ", \"selected\": [";
  bool first = true;
  for (const NodeAddress a : seq.selected()) {
    if (!first) out += ", ";
    first = false;
    out += "[" + std::to_string(a.level) + ", " + std::to_string(a.index) + "]";
  }
  out += "]}";
  return out;
}

CarlesonSeq seq_from_json(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::parse_error& e) {
    const auto [line, column] = line_and_column(text, e.byte == 0 ? 0 : e.byte - 1);
    throw ParseError("line " + std::to_string(line) + ", column " + std::to_string(column) +
                     ": invalid JSON");
  }
  if (!doc.is_object()) throw ParseError("top level: expected a JSON object");

  const auto format = doc.find("format");
  if (format == doc.end() || !format->is_string() || format->get<std::string>() != kFormatTag) {
    throw ParseError("field 'format': expected \"" + std::string(kFormatTag) + "\"");
  }
  const auto depth = doc.find("depth");
  if (depth == doc.end() || !depth->is_number_unsigned()) {
    throw ParseError("field 'depth': expected a non-negative integer");
  }
  const auto depth_value = depth->get<std::uint64_t>();
  if (depth_value > CarlesonSeq::kMaxDepth) {
    throw ParseError("field 'depth': " + std::to_string(depth_value) + " exceeds the maximum " +
                     std::to_string(CarlesonSeq::kMaxDepth));
  }
  const auto selected = doc.find("selected");
  if (selected == doc.end() || !selected->is_array()) {
    throw ParseError("field 'selected': expected an array of [level, index] pairs");
  }

  std::vector<NodeAddress> addresses;
  addresses.reserve(selected->size());
  for (std::size_t i = 0; i < selected->size(); ++i) {
    const auto& item = (*selected)[i];
    const std::string where = "field 'selected[" + std::to_string(i) + "]'";
    if (!item.is_array() || item.size() != 2 || !item[0].is_number_unsigned() ||
        !item[1].is_number_unsigned()) {
      throw ParseError(where + ": expected [level, index] with non-negative integers");
    }
    const auto level = item[0].get<std::uint64_t>();
    const auto index = item[1].get<std::uint64_t>();
    if (level > depth_value) {
      throw ParseError(where + ": level " + std::to_string(level) + " exceeds depth " +
                       std::to_string(depth_value));
    }
    if (index >= (std::uint64_t{1} << level)) {
      throw ParseError(where + ": index " + std::to_string(index) + " out of range for level " +
                       std::to_string(level));
    }
    addresses.push_back({static_cast<std::uint32_t>(level), index});
  }
  return {static_cast<unsigned>(depth_value), std::move(addresses)};
}

}  // namespace sparsebell
