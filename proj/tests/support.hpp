#pragma once

#include <initializer_list>
#include <string>
#include <vector>

#include "l1renorm/dyadic.hpp"

namespace support {

inline l1renorm::Rational Q(const std::string& s) { return l1renorm::Rational::parse(s); }

/// step(level; v1, v2, ...) with values written as "p/q" strings.
inline l1renorm::DyadicStep step(int level, std::initializer_list<const char*> vals) {
  std::vector<l1renorm::Rational> v;
  for (const char* s : vals) v.push_back(Q(s));
  return l1renorm::DyadicStep(level, std::move(v));
}

}  // namespace support
