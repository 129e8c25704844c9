#include "fad/xyz.hpp"

#include <fstream>
#include <sstream>

#include "fad/objective.hpp"

namespace fad {

Vector read_xyz(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("read_xyz: cannot open " + path);
  std::string line;
  if (!std::getline(in, line)) throw InputError("read_xyz: empty file " + path);
  int n = 0;
  try {
    n = std::stoi(line);
  } catch (...) {
    throw InputError("read_xyz: bad atom count in " + path);
  }
  if (n <= 0) throw InputError("read_xyz: nonpositive atom count in " + path);
  std::getline(in, line);  // comment
  Vector q(3 * n);
  for (int i = 0; i < n; ++i) {
    if (!std::getline(in, line))
      throw InputError("read_xyz: truncated file " + path);
    std::istringstream ss(line);
    std::string el;
    if (!(ss >> el >> q[3 * i] >> q[3 * i + 1] >> q[3 * i + 2]))
      throw InputError("read_xyz: malformed atom line in " + path);
  }
  return q;
}

void write_xyz(const std::string& path, const Vector& q,
               const std::string& comment, const std::string& element) {
  if (q.size() % 3 != 0) throw InputError("write_xyz: not a 3N vector");
  std::ofstream out(path);
  if (!out) throw InputError("write_xyz: cannot open " + path);
  const int n = static_cast<int>(q.size() / 3);
  out << n << "\n" << comment << "\n";
  out.precision(15);
  for (int i = 0; i < n; ++i) {
    out << element << ' ' << q[3 * i] << ' ' << q[3 * i + 1] << ' '
        << q[3 * i + 2] << "\n";
  }
}

}  // namespace fad
