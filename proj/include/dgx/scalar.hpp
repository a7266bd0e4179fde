#pragma once

#include <gmpxx.h>

#include <limits>
#include <stdexcept>
#include <string>

namespace dgx {

using Q = mpq_class;

struct input_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// "p/q" or "p", canonicalized
inline Q parse_q(const std::string& s) {
  Q r;
  if (s.empty() || r.set_str(s, 10) != 0) throw input_error("bad rational literal '" + s + "'");
  if (r.get_den() == 0) throw input_error("zero denominator in '" + s + "'");
  r.canonicalize();
  return r;
}

inline std::string str(const Q& q) {
  if (q.get_den() == 1) return q.get_num().get_str();
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

inline int sgn(int e) { return (e & 1) ? -1 : 1; }

}  // namespace dgx
