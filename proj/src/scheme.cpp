#include "vecagg/scheme.hpp"

#include <map>
#include <sstream>
#include <utility>

#include "vecagg/rng.hpp"

namespace vecagg {

AggregationSpec AggregationSpec::make(const Field& field, const Matrix& f,
                                      const Matrix& g, int len) {
  if (f.field() != field || g.field() != field) {
    throw UsageError("matrices must live in the instance field");
  }
  if (f.cols() != g.cols()) {
    throw UsageError("f and g must have one column per user (" +
                     std::to_string(f.cols()) + " vs " + std::to_string(g.cols()) + ")");
  }
  if (f.rows() < 1) throw UsageError("computation matrix must have at least one row");
  if (len < 1) throw UsageError("input length must be >= 1");
  for (int c = 0; c < f.cols(); ++c) {
    bool zero = true;
    for (int r = 0; r < f.rows(); ++r) {
      if (f(r, c) != 0) zero = false;
    }
    if (zero) {
      throw UsageError("computation matrix does not have zero columns by assumption; "
                       "column " + std::to_string(c) + " is zero");
    }
  }
  if (rank(f) != f.rows()) {
    throw UsageError("computation matrix must have full row rank");
  }
  if (rank(g) != g.rows()) {
    throw UsageError("protection matrix must have full row rank");
  }
  return {field, f, g, len};
}

namespace {

// Mask rows in permuted user order: the leading M users combine noise with
// -f_tilde * v_perp, the rest take v_perp rows directly.
Matrix masks_from_parts(const AggregationSpec& spec, const Normalization& norm,
                        const Matrix& v_perp) {
  Matrix top = (norm.f_tilde * v_perp).negated();
  Matrix mask_perm = vstack(top, v_perp);
  Matrix mask(spec.field, spec.users(), v_perp.cols());
  for (int j = 0; j < spec.users(); ++j) {
    for (int c = 0; c < v_perp.cols(); ++c) mask(norm.perm[j], c) = mask_perm(j, c);
  }
  return mask;
}

void require_noise_cancels(const Scheme& scheme) {
  int blocks = scheme.uniform_mask() ? 1 : scheme.spec.len;
  for (int b = 0; b < blocks; ++b) {
    if (!(scheme.spec.f * scheme.mask_for_block(b)).is_zero()) {
      throw InternalError("scheme mask does not cancel under f");
    }
  }
}

}  // namespace

Scheme assemble(const AggregationSpec& spec, const Normalization& norm, Matrix v,
                Matrix v_perp) {
  const int k = spec.users();
  const int m = spec.m();
  const int r = rank(vstack(spec.f, spec.g));

  if (v.rows() != k - r || v.cols() != k - m) {
    throw UsageError("completion matrix must be " + std::to_string(k - r) + "x" +
                     std::to_string(k - m));
  }
  if (v_perp.rows() != k - m || v_perp.cols() != r - m) {
    throw UsageError("precoder must be " + std::to_string(k - m) + "x" +
                     std::to_string(r - m));
  }
  if (!(v * v_perp).is_zero()) {
    throw UsageError("precoder is not in the completion's right kernel");
  }
  if (rank(v_perp) != r - m) {
    throw UsageError("precoder must have full column rank");
  }
  if (v.rows() > 0) {
    Matrix fp = apply_col_perm(spec.f, norm.perm);
    Matrix gp = apply_col_perm(spec.g, norm.perm);
    Matrix padded = hstack(Matrix(spec.field, v.rows(), m), v);
    if (rank(vstack(vstack(fp, gp), padded)) != k) {
      throw UsageError("stack [f; g; [0|v]] does not reach full rank");
    }
  }

  Scheme scheme{spec, norm, std::move(v), std::move(v_perp), {}, r - m};
  scheme.masks.push_back(masks_from_parts(spec, norm, *scheme.v_perp));
  require_noise_cancels(scheme);
  return scheme;
}

Scheme construct(const AggregationSpec& spec) {
  Normalization norm = normalize_computation(spec.f);
  Matrix v = completion_v(spec.f, spec.g, norm);
  Matrix v_perp = right_kernel_basis(v);
  return assemble(spec, norm, std::move(v), std::move(v_perp));
}

namespace {

// Exhaustive single-block security check by the exact factorization
// identity N(f,g,x)*N(f) = N(f,g)*N(f,x). Small instances only; the
// section 6 builder gates on it.
bool block_is_secure(const AggregationSpec& spec, const Matrix& mask) {
  const Field& field = spec.field;
  const uint32_t q = field.q();
  const int k = spec.users();
  const int sp = mask.cols();

  using Key = std::vector<uint32_t>;
  std::map<Key, uint64_t> nf, nfg, nfx, nfgx;

  std::vector<uint32_t> w(k, 0), s(sp, 0);
  auto next = [q](std::vector<uint32_t>& d) {
    for (auto& v : d) {
      if (++v < q) return true;
      v = 0;
    }
    return false;
  };

  bool more_w = true;
  while (more_w) {
    Key fk, gk;
    for (int i = 0; i < spec.m(); ++i) {
      uint64_t acc = 0;
      for (int c = 0; c < k; ++c) acc += static_cast<uint64_t>(spec.f(i, c)) * w[c];
      fk.push_back(static_cast<uint32_t>(acc % q));
    }
    for (int i = 0; i < spec.n(); ++i) {
      uint64_t acc = 0;
      for (int c = 0; c < k; ++c) acc += static_cast<uint64_t>(spec.g(i, c)) * w[c];
      gk.push_back(static_cast<uint32_t>(acc % q));
    }
    bool more_s = true;
    std::fill(s.begin(), s.end(), 0);
    do {
      Key xk;
      for (int c = 0; c < k; ++c) {
        uint64_t acc = w[c];
        for (int j = 0; j < sp; ++j) acc += static_cast<uint64_t>(mask(c, j)) * s[j];
        xk.push_back(static_cast<uint32_t>(acc % q));
      }
      Key fg = fk, fx = fk, fgx = fk;
      fg.insert(fg.end(), gk.begin(), gk.end());
      fx.insert(fx.end(), xk.begin(), xk.end());
      fgx.insert(fgx.end(), gk.begin(), gk.end());
      fgx.insert(fgx.end(), xk.begin(), xk.end());
      ++nf[fk];
      ++nfg[fg];
      ++nfx[fx];
      ++nfgx[fgx];
      more_s = sp > 0 && next(s);
    } while (more_s);
    more_w = next(w);
  }

  for (const auto& [fg, cfg] : nfg) {
    Key fk(fg.begin(), fg.begin() + spec.m());
    for (const auto& [fx, cfx] : nfx) {
      if (!std::equal(fk.begin(), fk.end(), fx.begin())) continue;
      Key fgx = fg;
      fgx.insert(fgx.end(), fx.begin() + spec.m(), fx.end());
      auto it = nfgx.find(fgx);
      uint64_t fine = it == nfgx.end() ? 0 : it->second;
      if (fine * nf[fk] != cfg * cfx) return false;
    }
  }
  return true;
}

}  // namespace

Scheme symmetrized_three_user(const Field& field) {
  if (field.q() < 5) {
    throw UsageError("the symmetrized three-user scheme needs q >= 5");
  }
  Matrix f = Matrix::from_rows(field, {{1, 1, 1}});
  Matrix g = Matrix::from_rows(field, {{1, 2, 3}});
  AggregationSpec spec = AggregationSpec::make(field, f, g, 3);

  Normalization norm = normalize_computation(f);
  std::vector<Matrix> masks;
  masks.push_back(Matrix::from_rows(field, {{0}, {1}, {-1}}));
  masks.push_back(Matrix::from_rows(field, {{1}, {0}, {-1}}));
  masks.push_back(Matrix::from_rows(field, {{1}, {-1}, {0}}));

  AggregationSpec block_spec = AggregationSpec::make(field, f, g, 1);
  for (size_t b = 0; b < masks.size(); ++b) {
    if (!(f * masks[b]).is_zero()) {
      throw ConstructionError("block " + std::to_string(b) + " does not cancel under f");
    }
    if (!block_is_secure(block_spec, masks[b])) {
      throw ConstructionError("block " + std::to_string(b) +
                              " failed the exhaustive security check; "
                              "adjust its mask coefficients");
    }
  }

  return Scheme{spec, std::move(norm), std::nullopt, std::nullopt, std::move(masks), 1};
}

KeyMaterial derive_keys(const Scheme& scheme, const Matrix& s) {
  const AggregationSpec& spec = scheme.spec;
  if (s.field() != spec.field || s.rows() != scheme.s_per_block || s.cols() != spec.len) {
    throw UsageError("source noise must be " + std::to_string(scheme.s_per_block) + "x" +
                     std::to_string(spec.len));
  }
  Matrix n = scheme.v_perp ? (*scheme.v_perp) * s : Matrix(spec.field, 0, spec.len);

  std::vector<KeyBlock> per_user(spec.users());
  for (int k = 0; k < spec.users(); ++k) {
    for (int b = 0; b < spec.len; ++b) {
      const Matrix& mask = scheme.mask_for_block(b);
      bool covered = false;
      uint64_t acc = 0;
      for (int j = 0; j < mask.cols(); ++j) {
        if (mask(k, j) != 0) covered = true;
        acc += static_cast<uint64_t>(mask(k, j)) * s(j, b) % spec.field.q();
      }
      if (covered) {
        per_user[k].symbols.push_back(static_cast<uint32_t>(acc % spec.field.q()));
        per_user[k].blocks.push_back(b);
      }
    }
  }
  return {s, std::move(n), std::move(per_user)};
}

KeyMaterial keygen(const Scheme& scheme, uint64_t seed) {
  Rng rng(seed);
  Matrix s(scheme.spec.field, scheme.s_per_block, scheme.spec.len);
  for (int r = 0; r < s.rows(); ++r) {
    for (int c = 0; c < s.cols(); ++c) s(r, c) = rng.residue(scheme.spec.field.q());
  }
  return derive_keys(scheme, s);
}

Matrix encode(const Scheme& scheme, int user, const Matrix& w_row, const KeyBlock& key) {
  const AggregationSpec& spec = scheme.spec;
  if (user < 0 || user >= spec.users()) throw UsageError("user index out of range");
  if (w_row.field() != spec.field || w_row.rows() != 1 || w_row.cols() != spec.len) {
    throw UsageError("input must be a 1x" + std::to_string(spec.len) + " row");
  }
  if (key.symbols.size() != key.blocks.size()) {
    throw UsageError("malformed key block");
  }
  Matrix x = w_row;
  for (size_t i = 0; i < key.blocks.size(); ++i) {
    int b = key.blocks[i];
    if (b < 0 || b >= spec.len) throw UsageError("key block index out of range");
    x(0, b) = spec.field.add(x(0, b), key.symbols[i]);
  }
  return x;
}

Matrix decode(const Scheme& scheme, const std::vector<Matrix>& messages) {
  const AggregationSpec& spec = scheme.spec;
  if (static_cast<int>(messages.size()) != spec.users()) {
    throw UsageError("incomplete transcript: have " + std::to_string(messages.size()) +
                     " of " + std::to_string(spec.users()) +
                     " messages; no partial decoding");
  }
  for (const Matrix& x : messages) {
    if (x.field() != spec.field || x.rows() != 1 || x.cols() != spec.len) {
      throw UsageError("message must be a 1x" + std::to_string(spec.len) + " row");
    }
  }
  const int m = spec.m();
  Matrix top(spec.field, m, spec.len);
  Matrix bottom(spec.field, spec.users() - m, spec.len);
  for (int j = 0; j < spec.users(); ++j) {
    const Matrix& x = messages[scheme.norm.perm[j]];
    for (int c = 0; c < spec.len; ++c) {
      if (j < m) {
        top(j, c) = x(0, c);
      } else {
        bottom(j - m, c) = x(0, c);
      }
    }
  }
  return scheme.norm.t_inv * (top + scheme.norm.f_tilde * bottom);
}

RateReport rate_report(const Scheme& scheme) {
  const int len = scheme.spec.len;
  RateReport report;
  report.r = Rational(1);
  report.r_zsigma = Rational(static_cast<int64_t>(scheme.total_key_symbols()), len);
  report.r_z_max = Rational(0);
  for (int k = 0; k < scheme.spec.users(); ++k) {
    int covered = static_cast<int>(covered_blocks(scheme, k).size());
    Rational rz(covered, len);
    if (report.r_z_max < rz) report.r_z_max = rz;
    report.r_z.push_back(rz);
  }
  return report;
}

std::vector<int> covered_blocks(const Scheme& scheme, int user) {
  std::vector<int> blocks;
  for (int b = 0; b < scheme.spec.len; ++b) {
    const Matrix& mask = scheme.mask_for_block(b);
    for (int j = 0; j < mask.cols(); ++j) {
      if (mask(user, j) != 0) {
        blocks.push_back(b);
        break;
      }
    }
  }
  return blocks;
}

Scheme drop_key_symbol(const Scheme& scheme, int index) {
  if (index < 0 || index >= scheme.s_per_block) {
    throw UsageError("key symbol index out of range");
  }
  std::vector<int> keep;
  for (int j = 0; j < scheme.s_per_block; ++j) {
    if (j != index) keep.push_back(j);
  }
  Scheme out = scheme;
  out.s_per_block -= 1;
  for (Matrix& mask : out.masks) mask = mask.columns(keep);
  if (out.v_perp) out.v_perp = out.v_perp->columns(keep);
  require_noise_cancels(out);
  return out;
}

Scheme corrupt_mask_entry(const Scheme& scheme, int user, int col, uint32_t delta) {
  if (scheme.masks.empty() || col < 0 || col >= scheme.masks[0].cols() || user < 0 ||
      user >= scheme.spec.users()) {
    throw UsageError("mask entry out of range");
  }
  Scheme out = scheme;
  for (Matrix& mask : out.masks) {
    mask(user, col) = scheme.spec.field.add(mask(user, col), delta);
  }
  return out;
}

namespace {

void write_matrix(std::ostringstream& out, const std::string& name, const Matrix& m) {
  out << name << ' ' << m.rows() << ' ' << m.cols() << '\n';
  for (int r = 0; r < m.rows(); ++r) {
    for (int c = 0; c < m.cols(); ++c) {
      if (c) out << ' ';
      out << m(r, c);
    }
    out << '\n';
  }
}

}  // namespace

std::string export_scheme(const Scheme& scheme) {
  if (!scheme.v || !scheme.v_perp || !scheme.uniform_mask()) {
    throw UsageError("only schemes from the standard construction are exportable");
  }
  std::ostringstream out;
  out << "vecagg-scheme v1\n";
  out << "q=" << scheme.spec.field.q() << " K=" << scheme.spec.users()
      << " M=" << scheme.spec.m() << " L=" << scheme.spec.len
      << " LZS=" << scheme.s_per_block << '\n';
  out << "P=";
  for (size_t j = 0; j < scheme.norm.perm.size(); ++j) {
    if (j) out << ' ';
    out << scheme.norm.perm[j];
  }
  out << '\n';
  write_matrix(out, "T", scheme.norm.t);
  write_matrix(out, "Ftilde", scheme.norm.f_tilde);
  write_matrix(out, "V", *scheme.v);
  write_matrix(out, "Vperp", *scheme.v_perp);
  write_matrix(out, "mask", scheme.masks[0]);
  return out.str();
}

namespace {

struct LineReader {
  std::vector<std::string> lines;
  size_t pos = 0;

  explicit LineReader(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) lines.push_back(line);
  }

  const std::string& next(const char* what) {
    if (pos >= lines.size()) {
      throw ParseError(std::string("unexpected end of scheme file, expected ") + what,
                       static_cast<long>(lines.size() + 1));
    }
    return lines[pos++];
  }
  long line_no() const { return static_cast<long>(pos); }
};

std::vector<long long> parse_numbers(const std::string& line, long line_no) {
  std::istringstream in(line);
  std::vector<long long> out;
  long long v;
  while (in >> v) out.push_back(v);
  if (!in.eof()) throw ParseError("malformed number in '" + line + "'", line_no);
  return out;
}

Matrix read_matrix(LineReader& reader, const std::string& name, const Field& field) {
  std::istringstream header(reader.next(name.c_str()));
  std::string label;
  int rows = -1, cols = -1;
  header >> label >> rows >> cols;
  if (label != name || rows < 0 || cols < 0) {
    throw ParseError("expected '" + name + " <rows> <cols>'", reader.line_no());
  }
  Matrix m(field, rows, cols);
  for (int r = 0; r < rows; ++r) {
    auto nums = parse_numbers(reader.next("matrix row"), reader.line_no());
    if (static_cast<int>(nums.size()) != cols) {
      throw ParseError(name + " row has " + std::to_string(nums.size()) +
                       " entries, expected " + std::to_string(cols), reader.line_no());
    }
    for (int c = 0; c < cols; ++c) {
      if (nums[c] < 0 || nums[c] >= static_cast<long long>(field.q())) {
        throw ParseError("entry " + std::to_string(nums[c]) + " is not a canonical residue",
                         reader.line_no());
      }
      m(r, c) = static_cast<uint32_t>(nums[c]);
    }
  }
  return m;
}

}  // namespace

Scheme import_scheme(const std::string& text, const AggregationSpec& spec) {
  LineReader reader(text);
  if (reader.next("header") != "vecagg-scheme v1") {
    throw ParseError("not a vecagg-scheme v1 file", 1);
  }

  std::istringstream params(reader.next("parameters"));
  long long q = -1, k = -1, m = -1, len = -1, lzs = -1;
  std::string tok;
  while (params >> tok) {
    auto eq = tok.find('=');
    if (eq == std::string::npos) throw ParseError("malformed parameter '" + tok + "'", 2);
    long long value = 0;
    try {
      value = std::stoll(tok.substr(eq + 1));
    } catch (const std::exception&) {
      throw ParseError("malformed parameter '" + tok + "'", 2);
    }
    std::string key = tok.substr(0, eq);
    if (key == "q") q = value;
    else if (key == "K") k = value;
    else if (key == "M") m = value;
    else if (key == "L") len = value;
    else if (key == "LZS") lzs = value;
    else throw ParseError("unknown parameter '" + key + "'", 2);
  }
  if (q != spec.field.q() || k != spec.users() || m != spec.m() || len != spec.len) {
    throw UsageError("scheme file parameters do not match the problem instance");
  }

  const std::string& perm_line = reader.next("permutation");
  if (perm_line.rfind("P=", 0) != 0) throw ParseError("expected 'P=...'", reader.line_no());
  auto perm_nums = parse_numbers(perm_line.substr(2), reader.line_no());
  std::vector<int> perm(perm_nums.begin(), perm_nums.end());
  if (static_cast<int>(perm.size()) != spec.users()) {
    throw ParseError("permutation length must equal K", reader.line_no());
  }
  inverse_perm(perm);  // validates it is a permutation

  Matrix t = read_matrix(reader, "T", spec.field);
  Matrix f_tilde = read_matrix(reader, "Ftilde", spec.field);
  Matrix v = read_matrix(reader, "V", spec.field);
  Matrix v_perp = read_matrix(reader, "Vperp", spec.field);
  Matrix mask = read_matrix(reader, "mask", spec.field);

  if (t.rows() != spec.m() || t.cols() != spec.m()) {
    throw UsageError("transform T must be MxM");
  }
  Matrix normalized = t * apply_col_perm(spec.f, perm);
  Matrix expected = hstack(Matrix::identity(spec.field, spec.m()), f_tilde);
  if (normalized != expected) {
    throw UsageError("scheme file transform does not normalize this instance's f");
  }

  Normalization norm{t, inverse(t), std::move(perm), std::move(f_tilde)};
  Scheme scheme = assemble(spec, norm, std::move(v), std::move(v_perp));
  if (scheme.s_per_block != lzs) {
    throw UsageError("scheme file LZS does not match rank(g|f) for this instance");
  }
  if (scheme.masks[0] != mask) {
    throw UsageError("scheme file mask does not match its own parts");
  }
  return scheme;
}

}  // namespace vecagg
