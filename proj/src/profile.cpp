#include "itc/profile.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <set>
#include <sstream>

namespace itc {

namespace {

int parse_int_token(const std::string& token, const char* what) {
  std::size_t used = 0;
  int value = 0;
  try {
    value = std::stoi(token, &used);
  } catch (const std::exception&) {
    throw std::invalid_argument(std::string(what) + ": bad integer '" + token +
                                "'");
  }
  if (used != token.size()) {
    throw std::invalid_argument(std::string(what) + ": bad integer '" + token +
                                "'");
  }
  return value;
}

double parse_double_token(const std::string& token, const char* what) {
  std::size_t used = 0;
  double value = 0.0;
  try {
    value = std::stod(token, &used);
  } catch (const std::exception&) {
    throw std::invalid_argument(std::string(what) + ": bad number '" + token +
                                "'");
  }
  if (used != token.size() || !std::isfinite(value)) {
    throw std::invalid_argument(std::string(what) + ": bad number '" + token +
                                "'");
  }
  return value;
}

std::string format_fraction(double f) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", f);
  return buf;
}

}  // namespace

DegreeProfile DegreeProfile::parse(const std::string& literal) {
  if (literal.empty()) {
    throw std::invalid_argument("degree profile: empty literal");
  }
  std::vector<DegreeEntry> entries;
  std::stringstream stream(literal);
  std::string item;
  while (std::getline(stream, item, ',')) {
    const auto colon = item.find(':');
    if (item.empty() || colon == std::string::npos) {
      throw std::invalid_argument("degree profile: token '" + item +
                                  "' is not degree:fraction");
    }
    DegreeEntry entry;
    entry.degree = parse_int_token(item.substr(0, colon), "degree profile");
    entry.fraction =
        parse_double_token(item.substr(colon + 1), "degree profile");
    entries.push_back(entry);
  }
  return DegreeProfile(std::move(entries));
}

std::string DegreeProfile::to_literal() const {
  std::string out;
  for (const auto& e : entries_) {
    if (!out.empty()) out += ',';
    out += std::to_string(e.degree) + ':' + format_fraction(e.fraction);
  }
  return out;
}

bool DegreeProfile::is_regular() const {
  return entries_.size() == 1 && entries_.front().degree == 2;
}

std::optional<std::string> validate(const DegreeProfile& profile) {
  const auto& entries = profile.entries();
  if (entries.empty()) return "degree profile: no entries";
  std::set<int> seen;
  double sum = 0.0;
  for (const auto& e : entries) {
    if (e.degree < 2) {
      return "degree profile: degree " + std::to_string(e.degree) +
             " is below 2";
    }
    if (!seen.insert(e.degree).second) {
      return "degree profile: duplicate degree " + std::to_string(e.degree);
    }
    if (!(e.fraction > 0.0) || e.fraction > 1.0) {
      return "degree profile: fraction " + format_fraction(e.fraction) +
             " outside (0, 1]";
    }
    sum += e.fraction;
  }
  if (std::abs(sum - 1.0) > 1e-9) {
    return "degree profile: fractions sum to " + format_fraction(sum) +
           ", not 1";
  }
  return std::nullopt;
}

void require_valid(const DegreeProfile& profile) {
  if (auto violation = validate(profile)) {
    throw std::invalid_argument(*violation);
  }
}

double average_degree(const DegreeProfile& profile) {
  double mean = 0.0;
  for (const auto& e : profile.entries()) mean += e.degree * e.fraction;
  return mean;
}

PuncturePattern::PuncturePattern(std::vector<std::uint8_t> mask)
    : mask_(std::move(mask)) {
  if (mask_.empty()) {
    throw std::invalid_argument("puncture pattern: empty mask");
  }
  bool any_keep = false;
  for (auto flag : mask_) {
    if (flag > 1) {
      throw std::invalid_argument("puncture pattern: flags must be 0 or 1");
    }
    any_keep = any_keep || flag == 1;
  }
  if (!any_keep) {
    throw std::invalid_argument("puncture pattern: at least one keep needed");
  }
}

PuncturePattern PuncturePattern::parse(const std::string& bits) {
  std::vector<std::uint8_t> mask;
  mask.reserve(bits.size());
  for (char c : bits) {
    if (c != '0' && c != '1') {
      throw std::invalid_argument(
          std::string("puncture pattern: bad character '") + c + "'");
    }
    mask.push_back(static_cast<std::uint8_t>(c - '0'));
  }
  return PuncturePattern(std::move(mask));
}

std::string PuncturePattern::to_literal() const {
  std::string out;
  out.reserve(mask_.size());
  for (auto flag : mask_) out += static_cast<char>('0' + flag);
  return out;
}

double PuncturePattern::punctured_fraction() const {
  const auto zeros =
      std::count(mask_.begin(), mask_.end(), std::uint8_t{0});
  return static_cast<double>(zeros) / static_cast<double>(mask_.size());
}

double PuncturePattern::theta() const {
  return 1.0 / (2.0 - punctured_fraction());
}

Index PuncturePattern::keep_count(Index full_length) const {
  if (full_length < 0) {
    throw std::invalid_argument("puncture pattern: negative length");
  }
  const Index p = period();
  Index ones = 0;
  for (auto flag : mask_) ones += flag;
  Index count = (full_length / p) * ones;
  for (Index r = 0; r < full_length % p; ++r) {
    count += mask_[static_cast<std::size_t>(r)];
  }
  return count;
}

double code_rate(const DegreeProfile& profile, const PuncturePattern& pattern) {
  require_valid(profile);
  const double mean = average_degree(profile);
  const double f0 = pattern.punctured_fraction();
  return 1.0 / (1.0 + mean * (1.0 - f0));
}

RepetitionMap realize(const DegreeProfile& profile, Index frame_size) {
  require_valid(profile);
  auto entries = profile.entries();
  std::sort(entries.begin(), entries.end(),
            [](const DegreeEntry& a, const DegreeEntry& b) {
              return a.degree < b.degree;
            });
  const auto groups = static_cast<Index>(entries.size());
  if (frame_size < groups) {
    throw std::invalid_argument(
        "realize: frame size " + std::to_string(frame_size) +
        " below profile entry count " + std::to_string(groups));
  }

  // Largest-remainder rounding of fraction*frame_size, remainder ties going
  // to the larger degree.
  std::vector<Index> counts(static_cast<std::size_t>(groups));
  std::vector<double> remainders(static_cast<std::size_t>(groups));
  Index assigned = 0;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const double exact = entries[i].fraction * static_cast<double>(frame_size);
    counts[i] = static_cast<Index>(std::floor(exact));
    remainders[i] = exact - std::floor(exact);
    assigned += counts[i];
  }
  std::vector<std::size_t> order(entries.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) {
                     if (remainders[a] != remainders[b]) {
                       return remainders[a] > remainders[b];
                     }
                     return entries[a].degree > entries[b].degree;
                   });
  for (std::size_t i = 0; assigned < frame_size; ++i) {
    counts[order[i % order.size()]] += 1;
    assigned += 1;
  }

  RepetitionMap map;
  map.source_count = frame_size;
  map.degree_of.reserve(static_cast<std::size_t>(frame_size));
  for (std::size_t i = 0; i < entries.size(); ++i) {
    map.degree_of.insert(map.degree_of.end(),
                         static_cast<std::size_t>(counts[i]),
                         entries[i].degree);
  }
  map.group_start.resize(static_cast<std::size_t>(frame_size));
  Index position = 0;
  for (Index j = 0; j < frame_size; ++j) {
    map.group_start[static_cast<std::size_t>(j)] = position;
    const int degree = map.degree_of[static_cast<std::size_t>(j)];
    for (int k = 0; k < degree; ++k) {
      map.layout.push_back({j, k});
    }
    position += degree;
  }
  return map;
}

LlrVec depuncture(const LlrVec& kept, const PuncturePattern& pattern,
                  Index full_length) {
  if (kept.size() != pattern.keep_count(full_length)) {
    throw std::invalid_argument(
        "depuncture: kept length " + std::to_string(kept.size()) +
        " does not match " + std::to_string(pattern.keep_count(full_length)) +
        " keep positions");
  }
  LlrVec out = LlrVec::Zero(full_length);
  Index k = 0;
  for (Index p = 0; p < full_length; ++p) {
    if (pattern.keeps(p)) out[p] = kept[k++];
  }
  return out;
}

}  // namespace itc
