#include "lowrank/matrix_io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <sstream>
#include <vector>

namespace lowrank {

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

namespace {

std::string read_file_bytes(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

[[noreturn]] void parse_fail(const std::string& path, std::size_t line,
                             std::size_t offset, const std::string& what) {
  throw ParseError(path + ":" + std::to_string(line) + " (byte " +
                   std::to_string(offset) + "): " + what);
}

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() &&
         s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

// One CSV cell: `a`, `a+bi` or `a-bi`.
cplx parse_cell(const std::string& cell, const std::string& path,
                std::size_t line, std::size_t offset, bool& saw_imag) {
  const char* ptr = cell.c_str();
  char* end = nullptr;
  const double re = std::strtod(ptr, &end);
  if (end == ptr) parse_fail(path, line, offset, "expected a number");
  while (*end == ' ') ++end;
  if (*end == '\0') return {re, 0.0};
  if (*end != '+' && *end != '-')
    parse_fail(path, line, offset, "expected '+' or '-' before imaginary part");
  char* end2 = nullptr;
  const double im = std::strtod(end, &end2);
  if (end2 == end) parse_fail(path, line, offset, "bad imaginary part");
  if (*end2 != 'i')
    parse_fail(path, line, offset, "imaginary part must end in 'i'");
  ++end2;
  while (*end2 == ' ') ++end2;
  if (*end2 != '\0') parse_fail(path, line, offset, "trailing junk in cell");
  saw_imag = true;
  return {re, im};
}

MatrixFile read_csv(const std::string& path, const std::string& bytes) {
  std::vector<std::vector<cplx>> rows;
  bool saw_imag = false;
  std::size_t line_no = 1;
  std::size_t pos = 0;
  while (pos < bytes.size()) {
    std::size_t eol = bytes.find('\n', pos);
    if (eol == std::string::npos) eol = bytes.size();
    std::size_t len = eol - pos;
    if (len > 0 && bytes[pos + len - 1] == '\r') --len;
    const std::string line = bytes.substr(pos, len);
    if (!line.empty()) {
      std::vector<cplx> row;
      std::size_t cell_start = 0;
      while (true) {
        std::size_t comma = line.find(',', cell_start);
        const std::size_t cell_len =
            (comma == std::string::npos ? line.size() : comma) - cell_start;
        const std::string cell = line.substr(cell_start, cell_len);
        row.push_back(
            parse_cell(cell, path, line_no, pos + cell_start, saw_imag));
        if (comma == std::string::npos) break;
        cell_start = comma + 1;
      }
      if (!rows.empty() && row.size() != rows.front().size())
        parse_fail(path, line_no, pos, "ragged row: expected " +
                                           std::to_string(rows.front().size()) +
                                           " columns, got " +
                                           std::to_string(row.size()));
      rows.push_back(std::move(row));
    }
    pos = eol + 1;
    ++line_no;
  }
  if (rows.empty()) parse_fail(path, 1, 0, "empty matrix");

  MatrixFile mf;
  mf.format = saw_imag ? MatrixFormat::CsvComplex : MatrixFormat::CsvReal;
  mf.matrix = DenseMatrix(rows.size(), rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows[i].size(); ++j)
      mf.matrix(i, j) = rows[i][j];
  if (!mf.matrix.all_finite()) parse_fail(path, 1, 0, "non-finite entry");
  return mf;
}

struct PgmCursor {
  const std::string& bytes;
  const std::string& path;
  std::size_t pos = 0;

  void skip_ws_and_comments() {
    while (pos < bytes.size()) {
      const char ch = bytes[pos];
      if (ch == '#') {
        while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
      } else if (ch == ' ' || ch == '\t' || ch == '\r' || ch == '\n') {
        ++pos;
      } else {
        break;
      }
    }
  }

  long next_int(const char* what) {
    skip_ws_and_comments();
    const std::size_t start = pos;
    long value = 0;
    bool any = false;
    while (pos < bytes.size() && bytes[pos] >= '0' && bytes[pos] <= '9') {
      value = value * 10 + (bytes[pos] - '0');
      ++pos;
      any = true;
      if (value > 1000000000L) break;
    }
    if (!any)
      parse_fail(path, 0, start, std::string("expected ") + what);
    return value;
  }
};

MatrixFile read_pgm(const std::string& path, const std::string& bytes) {
  if (bytes.size() < 2 || bytes[0] != 'P' ||
      (bytes[1] != '2' && bytes[1] != '5'))
    parse_fail(path, 1, 0, "not a PGM file (want P2 or P5 magic)");
  const bool binary = bytes[1] == '5';

  PgmCursor cur{bytes, path, 2};
  const long width = cur.next_int("width");
  const long height = cur.next_int("height");
  const long maxval = cur.next_int("maxval");
  if (width < 1 || height < 1)
    parse_fail(path, 0, cur.pos, "bad image dimensions");
  if (maxval < 1 || maxval > 65535)
    parse_fail(path, 0, cur.pos, "maxval out of range [1, 65535]");

  MatrixFile mf;
  mf.format = MatrixFormat::Pgm;
  mf.pgm_maxval = static_cast<int>(maxval);
  mf.pgm_binary = binary;
  mf.matrix = DenseMatrix(static_cast<std::size_t>(height),
                          static_cast<std::size_t>(width));

  const std::size_t count = mf.matrix.size();
  if (binary) {
    ++cur.pos;  // single whitespace after maxval
    const std::size_t bytes_per = maxval > 255 ? 2 : 1;
    if (cur.pos + count * bytes_per > bytes.size())
      parse_fail(path, 0, cur.pos, "truncated pixel data");
    for (std::size_t i = 0; i < count; ++i) {
      unsigned value = static_cast<unsigned char>(bytes[cur.pos++]);
      if (bytes_per == 2)
        value = (value << 8) | static_cast<unsigned char>(bytes[cur.pos++]);
      if (value > static_cast<unsigned>(maxval))
        parse_fail(path, 0, cur.pos, "pixel exceeds maxval");
      mf.matrix.entries()[i] = static_cast<double>(value);
    }
  } else {
    for (std::size_t i = 0; i < count; ++i) {
      const long value = cur.next_int("pixel");
      if (value > maxval) parse_fail(path, 0, cur.pos, "pixel exceeds maxval");
      mf.matrix.entries()[i] = static_cast<double>(value);
    }
  }
  return mf;
}

void write_csv(std::ostream& out, const DenseMatrix& m, bool complex_cells) {
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (j) out << ',';
      const cplx z = m(i, j);
      if (complex_cells) {
        char buf[96];
        std::snprintf(buf, sizeof(buf), "%.17g%+.17gi", z.real(), z.imag());
        out << buf;
      } else {
        out << format_double(z.real());
      }
    }
    out << '\n';
  }
}

void write_pgm(std::ostream& out, const DenseMatrix& m, int maxval,
               bool binary) {
  out << (binary ? "P5" : "P2") << '\n'
      << m.cols() << ' ' << m.rows() << '\n'
      << maxval << '\n';
  std::size_t col = 0;
  for (std::size_t i = 0; i < m.size(); ++i) {
    double v = m.entries()[i].real();
    if (v < 0.0) v = 0.0;
    if (v > maxval) v = maxval;
    const long q = std::lround(v);
    if (binary) {
      if (maxval > 255) out.put(static_cast<char>((q >> 8) & 0xff));
      out.put(static_cast<char>(q & 0xff));
    } else {
      out << q;
      out.put(++col % m.cols() == 0 ? '\n' : ' ');
      if (col == m.cols()) col = 0;
    }
  }
}

}  // namespace

MatrixFile read_matrix_file(const std::string& path) {
  const std::string bytes = read_file_bytes(path);
  if (ends_with(path, ".pgm")) return read_pgm(path, bytes);
  return read_csv(path, bytes);
}

void write_matrix_file(const std::string& path, const MatrixFile& like,
                       const DenseMatrix& m) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  switch (like.format) {
    case MatrixFormat::CsvReal:
      write_csv(out, m, false);
      break;
    case MatrixFormat::CsvComplex:
      write_csv(out, m, true);
      break;
    case MatrixFormat::Pgm:
      write_pgm(out, m, like.pgm_maxval, like.pgm_binary);
      break;
  }
  if (!out) throw IoError("write to '" + path + "' failed");
}

}  // namespace lowrank
