#include "visa/matrix_io.hpp"

#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

#include "visa/errors.hpp"

namespace visa {

void write_matrix(std::ostream& out, const CouplingMatrix& J) {
  out << "N " << J.n() << '\n';
  out << std::setprecision(std::numeric_limits<double>::max_digits10);
  for (int i = 0; i < J.n(); ++i)
    for (int j = i + 1; j < J.n(); ++j)
      if (J(i, j) != 0.0) out << i << ' ' << j << ' ' << J(i, j) << '\n';
  for (int i = 0; i < J.n(); ++i)
    if (J.field()(i) != 0.0) out << "H " << i << ' ' << J.field()(i) << '\n';
}

CouplingMatrix read_matrix(std::istream& in) {
  std::string line;
  int n = -1;
  int lineno = 0;
  Eigen::MatrixXd w;
  Eigen::VectorXd h;
  auto fail = [&](const std::string& msg) {
    throw ValidationError("matrix file line " + std::to_string(lineno) + ": " + msg);
  };
  while (std::getline(in, line)) {
    ++lineno;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream ls(line);
    if (n < 0) {
      std::string tag;
      if (!(ls >> tag >> n) || tag != "N" || n < 1) fail("expected header 'N <n>'");
      w = Eigen::MatrixXd::Zero(n, n);
      h = Eigen::VectorXd::Zero(n);
      continue;
    }
    if (line[first] == 'H') {
      std::string tag;
      int i = 0;
      double v = 0.0;
      if (!(ls >> tag >> i >> v)) fail("malformed field line");
      if (i < 0 || i >= n) fail("field index out of range");
      h(i) = v;
      continue;
    }
    int i = 0, j = 0;
    double v = 0.0;
    if (!(ls >> i >> j >> v)) fail("malformed edge line");
    if (i < 0 || j < 0 || i >= n || j >= n) fail("edge index out of range");
    if (i >= j) fail("edge must satisfy i < j");
    if (w(i, j) != 0.0) fail("duplicate edge");
    w(i, j) = v;
    w(j, i) = v;
  }
  if (n < 0) throw ValidationError("matrix file is empty (missing 'N <n>' header)");
  return CouplingMatrix(std::move(w), std::move(h));
}

void save_matrix(const std::string& path, const CouplingMatrix& J) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  write_matrix(out, J);
  if (!out) throw IoError("write to '" + path + "' failed");
}

CouplingMatrix load_matrix(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "'");
  return read_matrix(in);
}

}  // namespace visa
