#include "dfsim/state_spec.hpp"

#include <charconv>

#include "dfsim/errors.hpp"

namespace dfsim {

std::string_view trim(std::string_view text) {
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = text.find_last_not_of(" \t\r\n");
  return text.substr(first, last - first + 1);
}

double parse_real(std::string_view text) {
  text = trim(text);
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  double value = 0.0;
  const auto* end = text.data() + text.size();
  const auto res = std::from_chars(text.data(), end, value);
  if (text.empty() || res.ec != std::errc{} || res.ptr != end) {
    throw ValidationError("not a real number: '" + std::string(text) + "'");
  }
  return value;
}

int parse_int(std::string_view text) {
  text = trim(text);
  int value = 0;
  const auto* end = text.data() + text.size();
  const auto res = std::from_chars(text.data(), end, value);
  if (text.empty() || res.ec != std::errc{} || res.ptr != end) {
    throw ValidationError("not an integer: '" + std::string(text) + "'");
  }
  return value;
}

cplx parse_complex(std::string_view text) {
  text = trim(text);
  if (text.empty()) throw ValidationError("empty complex literal");
  if (text.back() != 'j' && text.back() != 'i') return {parse_real(text), 0.0};
  std::string_view body = text.substr(0, text.size() - 1);
  // Split at the last sign that is not a leading sign or part of an exponent.
  std::size_t split = std::string_view::npos;
  for (std::size_t p = body.size(); p-- > 1;) {
    if ((body[p] == '+' || body[p] == '-') && body[p - 1] != 'e' && body[p - 1] != 'E') {
      split = p;
      break;
    }
  }
  auto imag_of = [&](std::string_view s) {
    if (s.empty() || s == "+") return 1.0;
    if (s == "-") return -1.0;
    return parse_real(s);
  };
  if (split == std::string_view::npos) return {0.0, imag_of(body)};
  return {parse_real(body.substr(0, split)), imag_of(body.substr(split))};
}

std::vector<std::string> parse_list(std::string_view text) {
  text = trim(text);
  if (text.size() < 2 || text.front() != '[' || text.back() != ']') {
    throw ValidationError("list must be enclosed in brackets: '" + std::string(text) + "'");
  }
  text = trim(text.substr(1, text.size() - 2));
  std::vector<std::string> out;
  if (text.empty()) return out;
  std::size_t start = 0;
  for (;;) {
    const auto comma = text.find(',', start);
    out.emplace_back(trim(text.substr(start, comma == std::string_view::npos ? text.npos : comma - start)));
    if (out.back().empty()) throw ValidationError("empty list element");
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

StateVector parse_state_spec(std::string_view spec) {
  spec = trim(spec);
  const auto colon = spec.find(':');
  if (colon == std::string_view::npos) throw UsageError("state spec needs 'kind:args': '" + std::string(spec) + "'");
  const std::string_view kind = spec.substr(0, colon);
  const std::string_view rest = spec.substr(colon + 1);

  if (kind == "eta") {
    std::vector<cplx> q;
    for (const auto& item : parse_list(rest)) q.push_back(parse_complex(item));
    return make_eta(q);
  }
  if (kind == "w") return make_w(parse_int(rest));
  if (kind == "ground") return ground_state(parse_int(rest));
  if (kind == "basis") {
    std::vector<int> occ;
    for (char c : trim(rest)) {
      if (c != '0' && c != '1') throw UsageError("basis bitstring may only contain 0 and 1");
      occ.push_back(c - '0');
    }
    if (occ.empty()) throw UsageError("empty basis bitstring");
    return basis_state(SpaceLabel::atoms(static_cast<int>(occ.size())), occ);
  }
  if (kind == "singlet") {
    std::vector<int> args;
    std::size_t start = 0;
    for (;;) {
      const auto c = rest.find(':', start);
      args.push_back(parse_int(rest.substr(start, c == std::string_view::npos ? rest.npos : c - start)));
      if (c == std::string_view::npos) break;
      start = c + 1;
    }
    if (args.size() != 3) throw UsageError("singlet spec is singlet:n:i:k");
    return make_singlet_embedding(args[0], args[1], args[2]);
  }
  throw UsageError("unknown state kind '" + std::string(kind) + "'");
}

}  // namespace dfsim
