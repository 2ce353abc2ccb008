#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "robustelm/errors.hpp"
#include "robustelm/format.hpp"
#include "robustelm/sdp.hpp"

namespace robustelm::sdp {

void write_triplets(std::ostream& os, const LmiProblem& p) {
  p.validate();
  os << "lmi-triplets 1\n" << p.dim << ' ' << p.nvars() << '\n';
  os << "blocks " << p.block_structure.size();
  for (int b : p.block_structure) os << ' ' << b;
  os << "\ncost";
  for (Eigen::Index i = 0; i < p.nvars(); ++i) os << ' ' << format_double(p.cost(i));
  os << '\n';
  auto dump = [&os](std::size_t index, const SparseSym& s) {
    for (const auto& e : s.entries())
      os << index << ' ' << e.row << ' ' << e.col << ' ' << format_double(e.value) << '\n';
  };
  dump(0, p.F0);
  for (std::size_t i = 0; i < p.F.size(); ++i) dump(i + 1, p.F[i]);
}

LmiProblem read_triplets(std::istream& is) {
  auto fail = [](const std::string& why) -> LmiProblem { throw DataError("read_triplets: " + why); };
  std::string tag;
  int version = 0;
  if (!(is >> tag >> version) || tag != "lmi-triplets") return fail("missing header");
  if (version != 1) return fail("unsupported version " + std::to_string(version));

  LmiProblem p;
  Eigen::Index nvars = 0;
  if (!(is >> p.dim >> nvars) || p.dim < 1 || nvars < 0) return fail("bad dimensions");
  std::size_t nblocks = 0;
  if (!(is >> tag >> nblocks) || tag != "blocks") return fail("missing blocks line");
  p.block_structure.resize(nblocks);
  for (auto& b : p.block_structure)
    if (!(is >> b)) return fail("bad block size");
  if (!(is >> tag) || tag != "cost") return fail("missing cost line");
  p.cost.resize(nvars);
  for (Eigen::Index i = 0; i < nvars; ++i) {
    std::string v;
    if (!(is >> v)) return fail("short cost line");
    p.cost(i) = parse_double(v);
  }
  p.F0 = SparseSym(p.dim);
  p.F.assign(nvars, SparseSym(p.dim));

  std::size_t index = 0;
  Eigen::Index r = 0, c = 0;
  std::string v;
  while (is >> index >> r >> c >> v) {
    if (index > static_cast<std::size_t>(nvars)) return fail("matrix index out of range");
    SparseSym& target = index == 0 ? p.F0 : p.F[index - 1];
    target.add(r, c, parse_double(v));
  }
  if (!is.eof()) return fail("malformed entry line");
  p.validate();
  return p;
}

}  // namespace robustelm::sdp
