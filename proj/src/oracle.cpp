#include "vecagg/oracle.hpp"

#include <algorithm>
#include <map>
#include <sstream>
#include <thread>

#include "vecagg/rng.hpp"

namespace vecagg::oracle {

namespace {

int thread_count(const Options& options) {
  if (options.threads > 0) return options.threads;
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

std::string digits_text(const std::vector<uint32_t>& ds) {
  if (ds.empty()) return "-";
  std::string out;
  for (size_t i = 0; i < ds.size(); ++i) {
    if (i) out += ' ';
    out += std::to_string(ds[i]);
  }
  return out;
}

Matrix matrix_from_digits(const Field& field, int rows, int len,
                          const std::vector<uint32_t>& ds) {
  Matrix m(field, rows, len);
  for (int r = 0; r < rows; ++r) {
    for (int b = 0; b < len; ++b) m(r, b) = ds[static_cast<size_t>(r) * len + b];
  }
  return m;
}

std::vector<uint32_t> digits_of_matrix(const Matrix& m) {
  std::vector<uint32_t> ds(static_cast<size_t>(m.rows()) * m.cols());
  for (int r = 0; r < m.rows(); ++r) {
    for (int b = 0; b < m.cols(); ++b) ds[static_cast<size_t>(r) * m.cols() + b] = m(r, b);
  }
  return ds;
}

/// v == q^e for some e >= 0? Returns e, or -1.
int exact_log(uint64_t v, uint32_t q) {
  if (v == 0) return -1;
  int e = 0;
  while (v % q == 0) {
    v /= q;
    ++e;
  }
  return v == 1 ? e : -1;
}

const char* status_word(Status s) {
  switch (s) {
    case Status::Pass: return "PASS";
    case Status::Fail: return "FAIL";
    default: return "INDETERMINATE";
  }
}

}  // namespace

TranscriptCounts enumerate_joint(const Scheme& scheme, const Options& options) {
  const AggregationSpec& spec = scheme.spec;
  const Field& field = spec.field;
  const uint32_t q = field.q();
  const int users = spec.users();
  const int len = spec.len;
  const int m = spec.m();

  TranscriptCounts tc(scheme, options);
  tc.q = q;
  tc.kl = users * len;
  tc.sl = scheme.s_per_block * len;
  tc.ml = m * len;
  tc.nl = spec.n() * len;

  auto states = checked_pow(q, tc.kl + tc.sl);
  if (!states || *states > options.budget) {
    std::string need = states ? std::to_string(*states) : "more than 2^64";
    throw BudgetError("enumeration requires " + need + " states but the budget is " +
                      std::to_string(options.budget));
  }
  tc.total = *states;

  // Rank-reduced (f, g) coordinates: c = basis * W determines the joint
  // realization (f, g) = (comb_f * c, comb_g * c) bijectively, so the
  // (f, g) tables stay dense within the X-space bound.
  RrefResult rr = rref(vstack(spec.f, spec.g));
  const int r = static_cast<int>(rr.pivots.size());
  tc.rl = r * len;
  tc.cond_rank = r - m;
  tc.basis = rr.r.rows_slice(0, r);
  tc.comb_f = Matrix(field, m, r);
  tc.comb_g = Matrix(field, spec.n(), r);
  for (int j = 0; j < r; ++j) {
    for (int i = 0; i < m; ++i) tc.comb_f(i, j) = spec.f(i, rr.pivots[j]);
    for (int i = 0; i < spec.n(); ++i) tc.comb_g(i, j) = spec.g(i, rr.pivots[j]);
  }
  if (tc.comb_f * tc.basis != spec.f || tc.comb_g * tc.basis != spec.g) {
    throw InternalError("rank-reduced coordinates fail to reproduce f and g");
  }

  tc.xr = Radix(q, tc.kl);
  tc.sr = Radix(q, tc.sl);
  tc.fr = Radix(q, tc.ml);
  tc.cr = Radix(q, tc.rl);
  if (tc.fr.size > UINT32_MAX) {
    throw BudgetError("f realization space too large to index");
  }

  tc.n_x.assign(tc.xr.size, 0);
  tc.n_c.assign(tc.cr.size, 0);
  tc.n_f.assign(tc.fr.size, 0);
  tc.n_s.assign(tc.sr.size, 0);

  // f index per rank-reduced coordinate.
  tc.f_of_c.resize(tc.cr.size);
  {
    std::vector<uint32_t> cd, fd(tc.ml);
    for (uint64_t c = 0; c < tc.cr.size; ++c) {
      tc.cr.decompose(c, cd);
      for (int i = 0; i < m; ++i) {
        for (int b = 0; b < len; ++b) {
          uint64_t acc = 0;
          for (int j = 0; j < r; ++j) {
            acc += static_cast<uint64_t>(tc.comb_f(i, j)) * cd[static_cast<size_t>(j) * len + b];
          }
          fd[static_cast<size_t>(i) * len + b] = static_cast<uint32_t>(acc % q);
        }
      }
      tc.f_of_c[c] = static_cast<uint32_t>(tc.fr.index(fd));
    }
  }

  // Per-s noise model through the real key derivation and encoders.
  tc.key_offsets.assign(users + 1, 0);
  for (int k = 0; k < users; ++k) {
    tc.key_offsets[k + 1] =
        tc.key_offsets[k] + static_cast<int>(covered_blocks(scheme, k).size());
  }
  const Matrix zero_row(field, 1, len);
  tc.noise_digits.resize(tc.sr.size);
  tc.basis_noise.resize(tc.sr.size);
  tc.f_noise_zero.resize(tc.sr.size);
  tc.key_symbols.resize(tc.sr.size);
  {
    std::vector<uint32_t> sd;
    for (uint64_t s = 0; s < tc.sr.size; ++s) {
      tc.sr.decompose(s, sd);
      Matrix source = matrix_from_digits(field, scheme.s_per_block, len, sd);
      KeyMaterial km = derive_keys(scheme, source);

      Matrix noise(field, users, len);
      std::vector<uint32_t> nd(tc.kl);
      std::vector<uint32_t> syms;
      for (int k = 0; k < users; ++k) {
        Matrix x = encode(scheme, k, zero_row, km.per_user[k]);
        for (int b = 0; b < len; ++b) {
          noise(k, b) = x(0, b);
          nd[static_cast<size_t>(k) * len + b] = x(0, b);
        }
        if (static_cast<int>(km.per_user[k].symbols.size()) !=
            tc.key_offsets[k + 1] - tc.key_offsets[k]) {
          throw InternalError("key coverage varies with the source noise");
        }
        syms.insert(syms.end(), km.per_user[k].symbols.begin(),
                    km.per_user[k].symbols.end());
      }
      tc.noise_digits[s] = std::move(nd);
      tc.basis_noise[s] = digits_of_matrix(tc.basis * noise);
      tc.f_noise_zero[s] = (spec.f * noise).is_zero() ? 1 : 0;
      tc.key_symbols[s] = std::move(syms);
    }
  }

  // Probe the real decoder. It applies one fixed linear map per block, so
  // unit messages at block 0 recover the whole map; other blocks must come
  // back zero.
  tc.decode_map = Matrix(field, m, users);
  {
    std::vector<Matrix> msgs(users, zero_row);
    for (int k = 0; k < users; ++k) {
      msgs[k](0, 0) = 1;
      Matrix out = decode(scheme, msgs);
      for (int i = 0; i < m; ++i) {
        tc.decode_map(i, k) = out(i, 0);
        for (int b = 1; b < len; ++b) {
          if (out(i, b) != 0) throw InternalError("decoder mixes input blocks");
        }
      }
      msgs[k](0, 0) = 0;
    }
  }

  // Anchor the linear model to the real path on sampled realizations.
  {
    Rng rng(0x76a5f00d5eedULL);
    std::vector<uint32_t> wd;
    for (int i = 0; i < 32; ++i) {
      uint64_t w_idx = rng.next() % tc.xr.size;
      uint64_t s_idx = rng.next() % tc.sr.size;
      tc.xr.decompose(w_idx, wd);
      Matrix w = matrix_from_digits(field, users, len, wd);
      std::vector<uint32_t> sd;
      tc.sr.decompose(s_idx, sd);
      KeyMaterial km = derive_keys(scheme, matrix_from_digits(field, scheme.s_per_block, len, sd));
      std::vector<Matrix> msgs;
      Matrix x(field, users, len);
      for (int k = 0; k < users; ++k) {
        msgs.push_back(encode(scheme, k, w.row(k), km.per_user[k]));
        for (int b = 0; b < len; ++b) {
          uint32_t predicted =
              field.add(w(k, b), tc.noise_digits[s_idx][static_cast<size_t>(k) * len + b]);
          if (msgs.back()(0, b) != predicted) {
            throw InternalError("noise model diverges from the real encoder");
          }
          x(k, b) = msgs.back()(0, b);
        }
      }
      if (decode(scheme, msgs) != tc.decode_map * x) {
        throw InternalError("probed decode map diverges from the real decoder");
      }
    }
  }

  // Counting passes, partitioned over W with private tables merged in
  // worker order so the result is independent of the thread count.
  const int threads = std::min<uint64_t>(thread_count(options), tc.xr.size ? tc.xr.size : 1);
  struct Local {
    std::vector<uint64_t> n_x, n_c, n_f;
  };
  std::vector<Local> locals(threads);
  {
    std::vector<std::thread> pool;
    uint64_t chunk = (tc.xr.size + threads - 1) / threads;
    for (int t = 0; t < threads; ++t) {
      uint64_t lo = std::min<uint64_t>(tc.xr.size, chunk * t);
      uint64_t hi = std::min<uint64_t>(tc.xr.size, lo + chunk);
      pool.emplace_back([&, t, lo, hi]() {
        Local& local = locals[t];
        local.n_x.assign(tc.xr.size, 0);
        local.n_c.assign(tc.cr.size, 0);
        local.n_f.assign(tc.fr.size, 0);

        std::vector<uint32_t> wd(tc.kl), cd(tc.rl);
        // (f, g) and f marginals move in bulk: each W pairs with every S.
        tc.xr.decompose(lo, wd);
        for (uint64_t w = lo; w < hi; ++w) {
          for (int i = 0; i < r; ++i) {
            for (int b = 0; b < len; ++b) {
              uint64_t acc = 0;
              for (int k = 0; k < users; ++k) {
                acc += static_cast<uint64_t>(tc.basis(i, k)) * wd[static_cast<size_t>(k) * len + b];
              }
              cd[static_cast<size_t>(i) * len + b] = static_cast<uint32_t>(acc % q);
            }
          }
          uint64_t c = tc.cr.index(cd);
          local.n_c[c] += tc.sr.size;
          local.n_f[tc.f_of_c[c]] += tc.sr.size;
          for (int d = 0; d < tc.kl; ++d) {
            if (++wd[d] < q) break;
            wd[d] = 0;
          }
        }

        // X counts need the full (W, S) product; X advances with W through
        // a single odometer per S value.
        std::vector<uint32_t> xd(tc.kl);
        for (uint64_t s = 0; s < tc.sr.size; ++s) {
          const std::vector<uint32_t>& nd = tc.noise_digits[s];
          tc.xr.decompose(lo, wd);
          uint64_t x_idx = 0;
          for (int d = 0; d < tc.kl; ++d) {
            xd[d] = field.add(wd[d], nd[d]);
            x_idx += xd[d] * tc.xr.weight[d];
          }
          for (uint64_t w = lo; w < hi; ++w) {
            ++local.n_x[x_idx];
            for (int d = 0; d < tc.kl; ++d) {
              bool carry = ++wd[d] == q;
              if (carry) wd[d] = 0;
              if (++xd[d] == q) {
                xd[d] = 0;
                x_idx -= tc.xr.weight[d] * (q - 1);
              } else {
                x_idx += tc.xr.weight[d];
              }
              if (!carry) break;
            }
          }
        }
      });
    }
    for (auto& th : pool) th.join();
    for (const Local& local : locals) {
      for (size_t i = 0; i < tc.n_x.size(); ++i) tc.n_x[i] += local.n_x[i];
      for (size_t i = 0; i < tc.n_c.size(); ++i) tc.n_c[i] += local.n_c[i];
      for (size_t i = 0; i < tc.n_f.size(); ++i) tc.n_f[i] += local.n_f[i];
    }
  }
  for (uint64_t s = 0; s < tc.sr.size; ++s) tc.n_s[s] = tc.xr.size;

  // Noise value multiset: the joint (W, X) distribution is uniform with
  // support q^kl * (distinct noise values) iff the multiplicities agree.
  {
    std::vector<uint64_t> nz;
    nz.reserve(tc.sr.size);
    for (uint64_t s = 0; s < tc.sr.size; ++s) nz.push_back(tc.xr.index(tc.noise_digits[s]));
    std::sort(nz.begin(), nz.end());
    uint64_t expect = 0;
    tc.noise_uniform = true;
    tc.noise_support = 0;
    for (size_t i = 0; i < nz.size();) {
      size_t j = i;
      while (j < nz.size() && nz[j] == nz[i]) ++j;
      if (tc.noise_support == 0) {
        expect = j - i;
      } else if (j - i != expect) {
        tc.noise_uniform = false;
      }
      ++tc.noise_support;
      i = j;
    }
  }

  // Support of the (f, g) table grouped by f, c ascending within a group.
  {
    tc.csr_begin.assign(tc.fr.size + 1, 0);
    for (uint64_t c = 0; c < tc.cr.size; ++c) {
      if (tc.n_c[c] > 0) ++tc.csr_begin[tc.f_of_c[c] + 1];
    }
    for (size_t i = 1; i < tc.csr_begin.size(); ++i) tc.csr_begin[i] += tc.csr_begin[i - 1];
    tc.csr_c.resize(tc.csr_begin.back());
    std::vector<uint64_t> cursor(tc.csr_begin.begin(), tc.csr_begin.end() - 1);
    for (uint64_t c = 0; c < tc.cr.size; ++c) {
      if (tc.n_c[c] > 0) tc.csr_c[cursor[tc.f_of_c[c]]++] = c;
    }
  }

  return tc;
}

CheckResult check_correctness(const TranscriptCounts& tc) {
  const AggregationSpec& spec = tc.scheme.spec;

  if (tc.decode_map != spec.f) {
    int bad = 0;
    for (int k = 0; k < spec.users(); ++k) {
      for (int i = 0; i < spec.m(); ++i) {
        if (tc.decode_map(i, k) != spec.f(i, k)) bad = k;
      }
    }
    std::vector<uint32_t> wd(tc.kl, 0);
    wd[static_cast<size_t>(bad) * spec.len] = 1;
    Matrix w = matrix_from_digits(spec.field, spec.users(), spec.len, wd);
    std::ostringstream msg;
    msg << "W=" << digits_text(wd) << " S=" << digits_text(std::vector<uint32_t>(tc.sl, 0))
        << "\n  decoded=" << digits_text(digits_of_matrix(tc.decode_map * w))
        << " truth=" << digits_text(digits_of_matrix(spec.f * w));
    return {Status::Fail, msg.str()};
  }

  for (uint64_t s = 0; s < tc.sr.size; ++s) {
    if (tc.f_noise_zero[s]) continue;
    Matrix noise = matrix_from_digits(spec.field, spec.users(), spec.len, tc.noise_digits[s]);
    std::vector<uint32_t> sd;
    tc.sr.decompose(s, sd);
    std::ostringstream msg;
    msg << "W=" << digits_text(std::vector<uint32_t>(tc.kl, 0)) << " S=" << digits_text(sd)
        << "\n  decoded=" << digits_text(digits_of_matrix(spec.f * noise))
        << " truth=" << digits_text(std::vector<uint32_t>(tc.ml, 0));
    return {Status::Fail, msg.str()};
  }

  return {Status::Pass, ""};
}

CheckResult check_security(const TranscriptCounts& tc) {
  const AggregationSpec& spec = tc.scheme.spec;
  const uint32_t q = tc.q;
  const int users = spec.users();
  const int len = spec.len;
  const int r = tc.basis.rows();

  struct Violation {
    uint64_t x = 0;
    uint64_t c = 0;
    uint64_t fine = 0, nf = 0, nfg = 0, nfx = 0;
  };

  const int threads = static_cast<int>(
      std::min<uint64_t>(thread_count(tc.options), tc.xr.size ? tc.xr.size : 1));
  std::vector<std::optional<Violation>> found(threads);
  std::vector<std::exception_ptr> errors(threads);

  auto scan_range = [&](int t, uint64_t lo, uint64_t hi) {
    std::vector<uint32_t> xd(tc.kl), cxd(tc.rl);
    std::vector<uint64_t> keys;
    keys.reserve(tc.sr.size);
    const Field& field = spec.field;

    tc.xr.decompose(lo, xd);
    for (int i = 0; i < r; ++i) {
      for (int b = 0; b < len; ++b) {
        uint64_t acc = 0;
        for (int k = 0; k < users; ++k) {
          acc += static_cast<uint64_t>(tc.basis(i, k)) * xd[static_cast<size_t>(k) * len + b];
        }
        cxd[static_cast<size_t>(i) * len + b] = static_cast<uint32_t>(acc % q);
      }
    }

    for (uint64_t x = lo; x < hi && !found[t]; ++x) {
      // Joint (f, g) slice at this x: one realization per S value.
      keys.clear();
      for (uint64_t s = 0; s < tc.sr.size; ++s) {
        const std::vector<uint32_t>& bn = tc.basis_noise[s];
        uint64_t c_idx = 0;
        for (int d = 0; d < tc.rl; ++d) {
          c_idx += field.sub(cxd[d], bn[d]) * tc.cr.weight[d];
        }
        keys.push_back(tc.f_of_c[c_idx] * tc.cr.size + c_idx);
      }
      std::sort(keys.begin(), keys.end());

      size_t i = 0;
      while (i < keys.size() && !found[t]) {
        uint64_t f_idx = keys[i] / tc.cr.size;
        size_t group_end = i;
        while (group_end < keys.size() && keys[group_end] / tc.cr.size == f_idx) {
          ++group_end;
        }
        uint64_t n_fx = group_end - i;

        // March this f's (f, g) support against the x slice; both are
        // ascending in c. Every slice entry must appear in the support.
        size_t ei = i;
        for (uint64_t ci = tc.csr_begin[f_idx]; ci < tc.csr_begin[f_idx + 1]; ++ci) {
          uint64_t c_sup = tc.csr_c[ci];
          uint64_t fine = 0;
          while (ei < group_end && keys[ei] % tc.cr.size == c_sup) {
            ++fine;
            ++ei;
          }
          unsigned __int128 lhs = static_cast<unsigned __int128>(fine) * tc.n_f[f_idx];
          unsigned __int128 rhs = static_cast<unsigned __int128>(tc.n_c[c_sup]) * n_fx;
          if (lhs != rhs) {
            found[t] = Violation{x, c_sup, fine, tc.n_f[f_idx], tc.n_c[c_sup], n_fx};
            break;
          }
        }
        if (!found[t] && ei != group_end) {
          throw InternalError("x slice contains a realization missing from N(f,g)");
        }
        i = group_end;
      }

      // advance x and its rank-reduced image together
      for (int d = 0; d < tc.kl; ++d) {
        bool carry = ++xd[d] == q;
        if (carry) xd[d] = 0;
        int user = d / len;
        int block = d % len;
        for (int bi = 0; bi < r; ++bi) {
          size_t pos = static_cast<size_t>(bi) * len + block;
          cxd[pos] = field.add(cxd[pos], tc.basis(bi, user));
        }
        if (!carry) break;
      }
    }
  };

  uint64_t chunk = (tc.xr.size + threads - 1) / threads;
  std::vector<std::thread> pool;
  for (int t = 0; t < threads; ++t) {
    uint64_t lo = std::min<uint64_t>(tc.xr.size, chunk * t);
    uint64_t hi = std::min<uint64_t>(tc.xr.size, lo + chunk);
    pool.emplace_back([&scan_range, &errors, t, lo, hi]() {
      try {
        scan_range(t, lo, hi);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (const auto& error : errors) {
    if (error) std::rethrow_exception(error);
  }

  std::optional<Violation> best;
  for (const auto& v : found) {
    if (v && (!best || v->x < best->x)) best = v;
  }
  if (!best) return {Status::Pass, ""};

  std::vector<uint32_t> xd, cd, fd(tc.ml), gd(tc.nl);
  tc.xr.decompose(best->x, xd);
  tc.cr.decompose(best->c, cd);
  Matrix cmat = matrix_from_digits(spec.field, tc.basis.rows(), len, cd);
  std::ostringstream msg;
  msg << "f=" << digits_text(digits_of_matrix(tc.comb_f * cmat))
      << " g=" << digits_text(digits_of_matrix(tc.comb_g * cmat))
      << " x=" << digits_text(xd) << "\n  N(f,g,x)=" << best->fine
      << " N(f)=" << best->nf << " N(f,g)=" << best->nfg << " N(f,x)=" << best->nfx
      << " (N(f,g,x)*N(f) != N(f,g)*N(f,x))";
  return {Status::Fail, msg.str()};
}

LeakageResult check_leakage_bound(const TranscriptCounts& tc) {
  LeakageResult res;
  res.bound = static_cast<int64_t>(tc.scheme.spec.users() - tc.cond_rank) * tc.scheme.spec.len;

  uint64_t support = 0;
  uint64_t value = 0;
  for (uint64_t x = 0; x < tc.xr.size; ++x) {
    if (tc.n_x[x] == 0) continue;
    if (support == 0) {
      value = tc.n_x[x];
    } else if (tc.n_x[x] != value) {
      res.status = Status::Indeterminate;
      res.witness = "X is not uniform over its support; flagged for manual review";
      return res;
    }
    ++support;
  }
  int tx = exact_log(support, tc.q);
  if (tx < 0) {
    res.status = Status::Indeterminate;
    res.witness = "X support size is not a power of q; flagged for manual review";
    return res;
  }

  if (!tc.noise_uniform) {
    res.status = Status::Indeterminate;
    res.witness = "(W,X) is not uniform over its support; flagged for manual review";
    return res;
  }
  int tn = exact_log(tc.noise_support, tc.q);
  if (tn < 0) {
    res.status = Status::Indeterminate;
    res.witness = "(W,X) support size is not a power of q; flagged for manual review";
    return res;
  }

  // H(X) = tx, H(W) = kl, H(W,X) = kl + tn, all in q-ary units.
  res.mi = static_cast<int64_t>(tx) - tn;
  if (res.mi > res.bound) {
    res.status = Status::Fail;
    res.witness = "I(X;W)=" + std::to_string(res.mi) + " exceeds (K - rank(G|F))*L=" +
                  std::to_string(res.bound);
  }
  return res;
}

std::vector<PerUserResult> check_per_user_bound(const TranscriptCounts& tc) {
  const AggregationSpec& spec = tc.scheme.spec;
  const int users = spec.users();
  const int len = spec.len;
  Radix lr(tc.q, len);

  std::vector<PerUserResult> results;
  for (int u = 0; u < users; ++u) {
    PerUserResult res;
    res.user = u;
    res.bound = len;

    // Other users' inputs enter the condition as free uniform coordinates:
    // full-space counts are exactly q^((K-1)L) times these, so uniformity
    // verdicts and entropies are unchanged by the reduction.
    std::map<std::vector<uint32_t>, int> classes;
    std::vector<int> class_of(tc.sr.size);
    for (uint64_t s = 0; s < tc.sr.size; ++s) {
      std::vector<uint32_t> others;
      const std::vector<uint32_t>& all = tc.key_symbols[s];
      others.reserve(all.size());
      for (int k = 0; k < users; ++k) {
        if (k == u) continue;
        others.insert(others.end(), all.begin() + tc.key_offsets[k],
                      all.begin() + tc.key_offsets[k + 1]);
      }
      auto [it, inserted] = classes.emplace(std::move(others), static_cast<int>(classes.size()));
      class_of[s] = it->second;
    }

    const size_t class_count = classes.size();
    std::vector<uint64_t> counts(class_count * lr.size, 0);
    std::vector<uint64_t> members(class_count, 0);
    std::vector<uint32_t> wu(len);
    for (uint64_t s = 0; s < tc.sr.size; ++s) {
      int z = class_of[s];
      ++members[z];
      const uint32_t* own = tc.noise_digits[s].data() + static_cast<size_t>(u) * len;
      for (uint64_t w = 0; w < lr.size; ++w) {
        lr.decompose(w, wu);
        uint64_t x_idx = 0;
        for (int b = 0; b < len; ++b) {
          x_idx += spec.field.add(wu[b], own[b]) * lr.weight[b];
        }
        ++counts[static_cast<size_t>(z) * lr.size + x_idx];
      }
    }

    // Per class the conditional law of X_u must be uniform over a power-of-q
    // support; H(X_u | rest) is then the member-weighted mean exponent.
    int64_t weighted = 0;
    bool indeterminate = false;
    for (size_t z = 0; z < class_count && !indeterminate; ++z) {
      uint64_t support = 0, value = 0;
      for (uint64_t x = 0; x < lr.size; ++x) {
        uint64_t cnt = counts[z * lr.size + x];
        if (cnt == 0) continue;
        if (support == 0) {
          value = cnt;
        } else if (cnt != value) {
          indeterminate = true;
          break;
        }
        ++support;
      }
      int tz = exact_log(support, tc.q);
      if (tz < 0) {
        indeterminate = true;
        break;
      }
      weighted += static_cast<int64_t>(members[z]) * tz;
    }

    if (indeterminate) {
      res.status = Status::Indeterminate;
      res.witness = "conditional message distribution is not uniform over a power-of-q "
                    "support; flagged for manual review";
    } else {
      res.entropy = Rational(weighted, static_cast<int64_t>(tc.sr.size));
      if (res.entropy < Rational(res.bound)) {
        res.status = Status::Fail;
        res.witness = "H(X_u | rest)=" + res.entropy.to_string() + " below L=" +
                      std::to_string(res.bound);
      }
    }
    results.push_back(std::move(res));
  }
  return results;
}

TotalKeyResult check_total_key_bound(const TranscriptCounts& tc) {
  TotalKeyResult res;
  res.cond_rank = tc.cond_rank;
  res.required = static_cast<int64_t>(tc.cond_rank) * tc.scheme.spec.len;

  for (uint64_t s = 0; s < tc.sr.size; ++s) {
    if (tc.n_s[s] != tc.xr.size) {
      res.status = Status::Indeterminate;
      res.witness = "source key counts are not uniform; flagged for manual review";
      return res;
    }
  }
  res.key_entropy = tc.sl;

  if (res.key_entropy < res.required) {
    res.status = Status::Fail;
    res.witness = "H(S)=" + std::to_string(res.key_entropy) + " below rank(G|F)*L=" +
                  std::to_string(res.required);
  }
  return res;
}

bool VerificationReport::all_pass() const {
  if (correctness.status != Status::Pass) return false;
  if (security.status != Status::Pass) return false;
  if (leakage.status != Status::Pass) return false;
  for (const auto& pu : per_user) {
    if (pu.status != Status::Pass) return false;
  }
  return total_key.status == Status::Pass;
}

VerificationReport run_all_checks(const Scheme& scheme, const Options& options) {
  TranscriptCounts counts = enumerate_joint(scheme, options);
  VerificationReport report;
  report.correctness = check_correctness(counts);
  report.security = check_security(counts);
  report.leakage = check_leakage_bound(counts);
  report.per_user = check_per_user_bound(counts);
  report.total_key = check_total_key_bound(counts);
  return report;
}

namespace {

void append_witness(std::string& out, const std::string& witness) {
  if (witness.empty()) return;
  out += "witness:\n  ";
  for (char ch : witness) {
    out += ch;
    if (ch == '\n') out += "  ";
  }
  out += '\n';
}

}  // namespace

std::string render(const VerificationReport& report) {
  std::string out;
  out += std::string("correctness ") + status_word(report.correctness.status) + "\n";
  append_witness(out, report.correctness.witness);
  out += std::string("security ") + status_word(report.security.status) + "\n";
  append_witness(out, report.security.witness);
  out += "leakage I(X;W)=" +
         (report.leakage.status == Status::Indeterminate ? std::string("?")
                                                         : std::to_string(report.leakage.mi)) +
         " bound=" + std::to_string(report.leakage.bound) + " " +
         status_word(report.leakage.status) + "\n";
  append_witness(out, report.leakage.witness);
  for (const auto& pu : report.per_user) {
    out += "per-user u=" + std::to_string(pu.user + 1) + " H=" +
           (pu.status == Status::Indeterminate ? std::string("?") : pu.entropy.to_string()) +
           " " + status_word(pu.status) + "\n";
    append_witness(out, pu.witness);
  }
  out += "total-key H(S)=" + std::to_string(report.total_key.key_entropy) +
         " rank(G|F)=" + std::to_string(report.total_key.cond_rank) + " " +
         status_word(report.total_key.status) + "\n";
  append_witness(out, report.total_key.witness);
  return out;
}

}  // namespace vecagg::oracle
