#include "kappa/calculus.hpp"

namespace kappa {

std::string basis_name(int mask) {
  if (mask == 0) return "1";
  std::string out;
  if (mask & kMaskDx) out += "dx";
  if (mask & kMaskPsiPlus) out += out.empty() ? "psi+" : "^psi+";
  if (mask & kMaskPsiMinus) out += out.empty() ? "psi-" : "^psi-";
  return out;
}

int basis_mask(const std::string& name) {
  if (name == "1") return 0;
  int mask = 0;
  std::size_t pos = 0;
  while (pos < name.size()) {
    if (pos > 0) {
      if (name[pos] != '^')
        throw ConfigError("bad basis name \"" + name + "\"");
      ++pos;
    }
    int bit = 0;
    if (name.compare(pos, 2, "dx") == 0) {
      bit = kMaskDx;
      pos += 2;
    } else if (name.compare(pos, 4, "psi+") == 0) {
      bit = kMaskPsiPlus;
      pos += 4;
    } else if (name.compare(pos, 4, "psi-") == 0) {
      bit = kMaskPsiMinus;
      pos += 4;
    } else {
      throw ConfigError("bad basis name \"" + name + "\"");
    }
    if (mask & bit || bit < mask)
      throw ConfigError("basis name out of canonical order: \"" + name +
                        "\"");
    mask |= bit;
  }
  return mask;
}

}  // namespace kappa
