#include "ltskit/symbols.hpp"

#include <algorithm>
#include <numeric>

#include "ltskit/error.hpp"

namespace lts {

SymbolTable::SymbolTable() {
  intern("#");  // kPad
  intern("-");  // kEps
}

Sym SymbolTable::intern(std::string_view name) {
  auto it = ids_.find(std::string(name));
  if (it != ids_.end()) return it->second;
  Sym id = static_cast<Sym>(names_.size());
  names_.emplace_back(name);
  ids_.emplace(names_.back(), id);
  return id;
}

std::optional<Sym> SymbolTable::find(std::string_view name) const {
  auto it = ids_.find(std::string(name));
  if (it == ids_.end()) return std::nullopt;
  return it->second;
}

const std::string& SymbolTable::name(Sym id) const {
  check_internal(id >= 0 && id < size(), "symbol id out of range");
  return names_[static_cast<std::size_t>(id)];
}

std::vector<int32_t> SymbolTable::string_ranks() const {
  std::vector<Sym> order(names_.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](Sym a, Sym b) { return names_[a] < names_[b]; });
  std::vector<int32_t> ranks(names_.size());
  for (std::size_t r = 0; r < order.size(); ++r) ranks[order[r]] = r;
  return ranks;
}

BaseStress split_stress(std::string_view phone, StressConvention conv) {
  BaseStress out;
  if (phone.empty()) return out;
  char last = phone.back();
  bool marked = conv == StressConvention::kAsterisk
                    ? last == '*'
                    : (last >= '0' && last <= '2');
  if (marked && phone.size() > 1) {
    out.base = std::string(phone.substr(0, phone.size() - 1));
    out.marker = std::string(1, last);
  } else {
    out.base = std::string(phone);
  }
  return out;
}

std::vector<std::string> pseudo_parts(const std::string& sym) {
  auto pos = sym.find('_');
  if (pos == std::string::npos || pos == 0 || pos + 1 == sym.size())
    return {sym};
  return {sym.substr(0, pos), sym.substr(pos + 1)};
}

bool is_pseudo(const std::string& sym) { return pseudo_parts(sym).size() == 2; }

std::string strip_stress_sym(const std::string& sym, StressConvention conv) {
  if (sym == "-") return sym;
  auto parts = pseudo_parts(sym);
  std::string out;
  for (auto& p : parts) {
    if (!out.empty()) out += '_';
    out += split_stress(p, conv).base;
  }
  return out;
}

std::string stress_marker_of(const std::string& sym, StressConvention conv) {
  std::string marker;
  for (auto& p : pseudo_parts(sym)) {
    auto bs = split_stress(p, conv);
    if (!bs.marker.empty()) marker = bs.marker;
  }
  return marker;
}

std::string attach_stress_sym(const std::string& sym, const std::string& marker,
                              const std::set<std::string>& vowel_bases,
                              StressConvention conv) {
  if (marker.empty() || sym == "-") return sym;
  auto parts = pseudo_parts(sym);
  // Attach to the last vowel part.
  int target = -1;
  for (int i = static_cast<int>(parts.size()) - 1; i >= 0; --i) {
    if (vowel_bases.count(split_stress(parts[i], conv).base)) {
      target = i;
      break;
    }
  }
  if (target < 0) return sym;
  parts[target] = split_stress(parts[target], conv).base + marker;
  std::string out;
  for (auto& p : parts) {
    if (!out.empty()) out += '_';
    out += p;
  }
  return out;
}

const char* to_string(StressConvention conv) {
  return conv == StressConvention::kAsterisk ? "asterisk" : "digits";
}

std::optional<StressConvention> stress_convention_from(std::string_view name) {
  if (name == "asterisk") return StressConvention::kAsterisk;
  if (name == "digits") return StressConvention::kCmuDigits;
  return std::nullopt;
}

}  // namespace lts
