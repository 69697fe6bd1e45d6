#include "prodlaw/io.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

#include "prodlaw/errors.hpp"

namespace prodlaw {

namespace fs = std::filesystem;

namespace {

constexpr char kMagic[8] = {'P', 'L', 'A', 'W', 'M', 'A', 'T', '1'};
constexpr std::uint32_t kComplex128 = 1;

static_assert(std::endian::native == std::endian::little, "binary format assumes little endian");

std::ofstream open_out(const fs::path& path, std::ios::openmode mode = std::ios::out) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, mode);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  return out;
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream ss(line);
  while (std::getline(ss, cur, ',')) out.push_back(cur);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double parse_double(const std::string& s) {
  std::size_t pos = 0;
  double v;
  try {
    v = std::stod(s, &pos);
  } catch (const std::exception&) {
    throw Error("not a number: '" + s + "'");
  }
  if (pos != s.size()) throw Error("trailing characters in number: '" + s + "'");
  return v;
}

template <class T>
void put(std::ofstream& out, T v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof v);
}

template <class T>
T get(std::ifstream& in) {
  T v;
  in.read(reinterpret_cast<char*>(&v), sizeof v);
  if (!in) throw Error("truncated matrix file");
  return v;
}

}  // namespace

std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::size_t CsvTable::column(const std::string& name) const {
  for (std::size_t i = 0; i < header.size(); ++i)
    if (header[i] == name) return i;
  throw Error("missing column '" + name + "'");
}

double CsvTable::number(std::size_t row, const std::string& name) const {
  const std::size_t c = column(name);
  if (row >= rows.size() || c >= rows[row].size()) throw Error("csv: row too short");
  return parse_double(rows[row][c]);
}

CsvTable read_csv(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  CsvTable t;
  std::string line;
  if (!std::getline(in, line)) throw Error("empty csv: " + path.string());
  if (!line.empty() && line.back() == '\r') line.pop_back();
  t.header = split(line);
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto row = split(line);
    if (row.size() != t.header.size())
      throw Error("csv: row width " + std::to_string(row.size()) + " != header width " +
                  std::to_string(t.header.size()) + " in " + path.string());
    t.rows.push_back(std::move(row));
  }
  return t;
}

void write_csv(const fs::path& path, const CsvTable& table) {
  std::ostringstream os;
  auto emit = [&os](const std::vector<std::string>& r) {
    for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << r[i];
    os << '\n';
  };
  emit(table.header);
  for (const auto& r : table.rows) emit(r);
  write_text(path, os.str());
}

void write_text(const fs::path& path, const std::string& text) {
  auto out = open_out(path, std::ios::out | std::ios::binary);
  out << text;
  if (!out) throw Error("write failed: " + path.string());
}

void write_matrices_binary(const fs::path& path, std::span<const Matrix> mats) {
  const std::uint64_t n = mats.empty() ? 0 : std::uint64_t(mats[0].rows());
  for (const Matrix& a : mats)
    if (std::uint64_t(a.rows()) != n || std::uint64_t(a.cols()) != n)
      throw DomainError("write_matrices_binary: all matrices must be n x n");
  auto out = open_out(path, std::ios::out | std::ios::binary);
  out.write(kMagic, sizeof kMagic);
  put<std::uint64_t>(out, n);
  put<std::uint64_t>(out, mats.size());
  put<std::uint32_t>(out, kComplex128);
  put<std::uint32_t>(out, 0);
  for (const Matrix& a : mats)
    for (Eigen::Index i = 0; i < a.rows(); ++i)
      for (Eigen::Index j = 0; j < a.cols(); ++j) {
        put<double>(out, a(i, j).real());
        put<double>(out, a(i, j).imag());
      }
  if (!out) throw Error("write failed: " + path.string());
}

std::vector<Matrix> read_matrices_binary(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  char magic[8];
  in.read(magic, sizeof magic);
  if (!in || std::memcmp(magic, kMagic, sizeof magic) != 0) throw Error("bad matrix file magic");
  const auto n = get<std::uint64_t>(in);
  const auto count = get<std::uint64_t>(in);
  if (get<std::uint32_t>(in) != kComplex128) throw Error("unsupported matrix dtype");
  get<std::uint32_t>(in);
  if (n > (1u << 16) || count > (1u << 20)) throw Error("matrix file header out of range");
  std::vector<Matrix> mats;
  for (std::uint64_t k = 0; k < count; ++k) {
    Matrix a(n, n);
    for (std::uint64_t i = 0; i < n; ++i)
      for (std::uint64_t j = 0; j < n; ++j) {
        const double re = get<double>(in);
        a(i, j) = cplx(re, get<double>(in));
      }
    mats.push_back(std::move(a));
  }
  return mats;
}

void write_matrix_csv(const fs::path& path, const Matrix& a) {
  CsvTable t{{"row", "col", "re", "im"}, {}};
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      t.rows.push_back({std::to_string(i), std::to_string(j), format_double(a(i, j).real()),
                        format_double(a(i, j).imag())});
  write_csv(path, t);
}

Matrix read_matrix_csv(const fs::path& path) {
  const CsvTable t = read_csv(path);
  Eigen::Index rows = 0, cols = 0;
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    rows = std::max<Eigen::Index>(rows, Eigen::Index(t.number(r, "row")) + 1);
    cols = std::max<Eigen::Index>(cols, Eigen::Index(t.number(r, "col")) + 1);
  }
  Matrix a = Matrix::Zero(rows, cols);
  for (std::size_t r = 0; r < t.rows.size(); ++r)
    a(Eigen::Index(t.number(r, "row")), Eigen::Index(t.number(r, "col"))) =
        cplx(t.number(r, "re"), t.number(r, "im"));
  return a;
}

void write_spectrum_csv(const fs::path& path, const Spectrum& s) {
  CsvTable t{{"re", "im", "modulus"}, {}};
  for (cplx z : s.eigenvalues)
    t.rows.push_back({format_double(z.real()), format_double(z.imag()), format_double(std::abs(z))});
  write_csv(path, t);
}

Spectrum read_spectrum_csv(const fs::path& path) {
  const CsvTable t = read_csv(path);
  std::vector<cplx> ev;
  for (std::size_t r = 0; r < t.rows.size(); ++r) ev.emplace_back(t.number(r, "re"), t.number(r, "im"));
  return make_spectrum(std::move(ev));
}

void write_counts_csv(const fs::path& path, std::span<const int> counts) {
  CsvTable t{{"trial", "count"}, {}};
  for (std::size_t i = 0; i < counts.size(); ++i)
    t.rows.push_back({std::to_string(i), std::to_string(counts[i])});
  write_csv(path, t);
}

std::vector<int> read_counts_csv(const fs::path& path) {
  const CsvTable t = read_csv(path);
  std::vector<int> out;
  for (std::size_t r = 0; r < t.rows.size(); ++r) out.push_back(int(t.number(r, "count")));
  return out;
}

void write_potential_csv(const fs::path& path, const PotentialField& f) {
  CsvTable t{{"re", "im", "U_n", "U_inf", "gap"}, {}};
  for (std::size_t i = 0; i < f.points.size(); ++i)
    t.rows.push_back({format_double(f.points[i].real()), format_double(f.points[i].imag()),
                      format_double(f.U_n[i]), format_double(f.U_inf[i]),
                      format_double(f.U_n[i] - f.U_inf[i])});
  write_csv(path, t);
}

void write_nodes_csv(const fs::path& path, std::span<const QuadratureNode> nodes) {
  CsvTable t{{"re", "im", "weight", "integrand_log_magnitude"}, {}};
  for (const auto& q : nodes)
    t.rows.push_back({format_double(q.re), format_double(q.im), format_double(q.weight),
                      format_double(q.integrand_log_magnitude)});
  write_csv(path, t);
}

}  // namespace prodlaw
