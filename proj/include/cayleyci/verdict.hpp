#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace cayleyci {

// Outcome of one machine check. Composite checks carry their sub-checks in
// `parts`; a composite passes iff all parts pass.
struct Verdict {
  std::string check;
  bool pass = true;
  std::string detail;
  // First failing item (a monomial, a point, a class label); empty on pass.
  std::string witness;
  std::size_t items_checked = 0;
  std::vector<Verdict> parts;

  void add_part(Verdict v) {
    pass = pass && v.pass;
    if (!v.pass && witness.empty()) {
      witness = v.check + ": " + v.witness;
    }
    items_checked += v.items_checked;
    parts.push_back(std::move(v));
  }

  void fail(std::string what) {
    if (pass) {
      witness = std::move(what);
    }
    pass = false;
  }
};

}  // namespace cayleyci
