#include "pmod2/f2series.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <sstream>

#if defined(__x86_64__) || defined(__i386__)
#include <immintrin.h>
#define PMOD2_X86 1
#endif

namespace pmod2 {

using Word = F2Series::Word;
constexpr std::size_t kBits = F2Series::kWordBits;

namespace {

std::size_t words_for(std::size_t bits) { return (bits + kBits - 1) / kBits; }

// ---------------------------------------------------------------------------
// Carry-less multiplication kernels.

void clmul64_soft(Word a, Word b, Word& lo, Word& hi) {
  unsigned __int128 table[16];
  table[0] = 0;
  for (int k = 1; k < 16; ++k) {
    table[k] = 0;
    for (int bit = 0; bit < 4; ++bit) {
      if ((k >> bit) & 1) table[k] ^= static_cast<unsigned __int128>(a) << bit;
    }
  }
  unsigned __int128 acc = 0;
  for (int shift = 60; shift >= 0; shift -= 4) {
    acc = (acc << 4) ^ table[(b >> shift) & 0xF];
  }
  lo = static_cast<Word>(acc);
  hi = static_cast<Word>(acc >> 64);
}

void schoolbook_soft(const Word* a, std::size_t na, const Word* b,
                     std::size_t nb, Word* out) {
  for (std::size_t i = 0; i < na; ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; j < nb; ++j) {
      Word lo, hi;
      clmul64_soft(a[i], b[j], lo, hi);
      out[i + j] ^= lo;
      out[i + j + 1] ^= hi;
    }
  }
}

#ifdef PMOD2_X86
__attribute__((target("pclmul,sse2"))) void schoolbook_hw(
    const Word* a, std::size_t na, const Word* b, std::size_t nb, Word* out) {
  for (std::size_t i = 0; i < na; ++i) {
    if (a[i] == 0) continue;
    const __m128i va = _mm_cvtsi64_si128(static_cast<long long>(a[i]));
    for (std::size_t j = 0; j < nb; ++j) {
      const __m128i vb = _mm_cvtsi64_si128(static_cast<long long>(b[j]));
      const __m128i p = _mm_clmulepi64_si128(va, vb, 0x00);
      Word parts[2];
      _mm_storeu_si128(reinterpret_cast<__m128i*>(parts), p);
      out[i + j] ^= parts[0];
      out[i + j + 1] ^= parts[1];
    }
  }
}
#endif

bool detect_clmul() {
#ifdef PMOD2_X86
  __builtin_cpu_init();
  return __builtin_cpu_supports("pclmul");
#else
  return false;
#endif
}

const bool kHardwareClmul = detect_clmul();

void schoolbook(const Word* a, std::size_t na, const Word* b, std::size_t nb,
                Word* out) {
#ifdef PMOD2_X86
  if (kHardwareClmul) {
    schoolbook_hw(a, na, b, nb, out);
    return;
  }
#endif
  schoolbook_soft(a, na, b, nb, out);
}

constexpr std::size_t kKaratsubaCutoff = 24;

// out[0 .. 2n) ^= a * b for equal lengths n. out must be zeroed by the caller
// for a plain product.
void karatsuba(const Word* a, const Word* b, std::size_t n, Word* out) {
  if (n <= kKaratsubaCutoff) {
    schoolbook(a, n, b, n, out);
    return;
  }
  const std::size_t h = (n + 1) / 2;
  const std::size_t l = n - h;
  std::vector<Word> z0(2 * h, 0), z2(2 * l, 0), z1(2 * h, 0);
  karatsuba(a, b, h, z0.data());
  karatsuba(a + h, b + h, l, z2.data());
  std::vector<Word> sa(a, a + h), sb(b, b + h);
  for (std::size_t i = 0; i < l; ++i) {
    sa[i] ^= a[h + i];
    sb[i] ^= b[h + i];
  }
  karatsuba(sa.data(), sb.data(), h, z1.data());
  for (std::size_t i = 0; i < 2 * h; ++i) z1[i] ^= z0[i];
  for (std::size_t i = 0; i < 2 * l; ++i) z1[i] ^= z2[i];
  for (std::size_t i = 0; i < 2 * h; ++i) out[i] ^= z0[i];
  for (std::size_t i = 0; i < 2 * l; ++i) out[2 * h + i] ^= z2[i];
  for (std::size_t i = 0; i < 2 * h; ++i) out[h + i] ^= z1[i];
}

// XOR src * q^shift into dst, restricted to dst's length.
void xor_shifted(std::span<const Word> src, std::size_t shift,
                 std::span<Word> dst) {
  const std::size_t ws = shift / kBits;
  const unsigned bs = shift % kBits;
  if (ws >= dst.size()) return;
  const std::size_t n = std::min(src.size(), dst.size() - ws);
  if (bs == 0) {
    for (std::size_t k = 0; k < n; ++k) dst[ws + k] ^= src[k];
    return;
  }
  Word carry = 0;
  for (std::size_t k = 0; k < n; ++k) {
    dst[ws + k] ^= (src[k] << bs) | carry;
    carry = src[k] >> (kBits - bs);
  }
  if (ws + n < dst.size()) dst[ws + n] ^= carry;
}

double karatsuba_cost(std::size_t n) {
  if (n <= kKaratsubaCutoff) return static_cast<double>(n * n);
  return std::pow(static_cast<double>(n), 1.585) * 3.0;
}

// Product truncated to `trunc` bits. Chooses a shift-and-XOR loop over the
// set bits of the sparser operand when that is cheaper than Karatsuba.
std::vector<Word> truncated_product(std::span<const Word> a,
                                    std::span<const Word> b,
                                    std::size_t trunc) {
  const std::size_t nw = words_for(trunc);
  std::vector<Word> out(nw, 0);
  if (nw == 0) return out;
  a = a.subspan(0, std::min(a.size(), nw));
  b = b.subspan(0, std::min(b.size(), nw));
  auto count = [](std::span<const Word> v) {
    std::size_t c = 0;
    for (Word w : v) c += static_cast<std::size_t>(std::popcount(w));
    return c;
  };
  const std::size_t pa = count(a), pb = count(b);
  if (pa == 0 || pb == 0) return out;
  const bool a_sparser = pa <= pb;
  const std::span<const Word> sparse = a_sparser ? a : b;
  const std::span<const Word> dense = a_sparser ? b : a;
  const std::size_t sparse_bits = std::min(pa, pb);
  const double dense_cost = karatsuba_cost(nw) * 4.0;
  if (static_cast<double>(sparse_bits) * static_cast<double>(nw) <= dense_cost) {
    for (std::size_t w = 0; w < sparse.size(); ++w) {
      Word word = sparse[w];
      while (word != 0) {
        const unsigned bit = static_cast<unsigned>(std::countr_zero(word));
        word &= word - 1;
        xor_shifted(dense, w * kBits + bit, out);
      }
    }
    return out;
  }
  std::vector<Word> full = detail::clmul_poly(a, b);
  std::copy_n(full.begin(), std::min(nw, full.size()), out.begin());
  return out;
}

}  // namespace

namespace detail {

bool hardware_clmul_available() { return kHardwareClmul; }

std::vector<Word> clmul_poly(std::span<const Word> a, std::span<const Word> b) {
  if (a.empty() || b.empty()) return {};
  if (a.size() < b.size()) std::swap(a, b);
  const std::size_t na = a.size(), nb = b.size();
  std::vector<Word> out(na + nb, 0);
  if (nb <= kKaratsubaCutoff) {
    schoolbook(a.data(), na, b.data(), nb, out.data());
    return out;
  }
  // Split the longer operand into blocks of the shorter one's length.
  std::vector<Word> block(nb, 0), prod(2 * nb, 0);
  for (std::size_t start = 0; start < na; start += nb) {
    const std::size_t len = std::min(nb, na - start);
    std::fill(block.begin(), block.end(), 0);
    std::copy_n(a.begin() + static_cast<std::ptrdiff_t>(start), len, block.begin());
    std::fill(prod.begin(), prod.end(), 0);
    karatsuba(block.data(), b.data(), nb, prod.data());
    const std::size_t lim = std::min(prod.size(), out.size() - start);
    for (std::size_t i = 0; i < lim; ++i) out[start + i] ^= prod[i];
  }
  return out;
}

}  // namespace detail

// ---------------------------------------------------------------------------

F2Series::F2Series(std::size_t trunc, std::int64_t offset24)
    : words_(words_for(trunc), 0), trunc_(trunc), offset24_(offset24) {}

F2Series F2Series::one(std::size_t trunc) {
  F2Series f(trunc);
  if (trunc > 0) f.set_bit(0);
  return f;
}

F2Series F2Series::from_indices(std::span<const std::int64_t> indices,
                                std::size_t trunc, std::int64_t offset24) {
  F2Series f(trunc, offset24);
  for (std::int64_t n : indices) {
    if (n < 0) throw ContractViolation("from_indices: negative index");
    if (static_cast<std::size_t>(n) < trunc) f.flip_bit(static_cast<std::size_t>(n));
  }
  return f;
}

F2Series F2Series::from_string(const std::string& bits, std::int64_t offset24) {
  F2Series f(bits.size(), offset24);
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (bits[i] == '1') {
      f.set_bit(i);
    } else if (bits[i] != '0') {
      throw ContractViolation("from_string: expected only '0' and '1'");
    }
  }
  return f;
}

void F2Series::set_bit(std::size_t n, bool value) {
  if (n >= trunc_) throw ContractViolation("set_bit beyond truncation");
  const Word mask = Word{1} << (n % kBits);
  if (value) {
    words_[n / kBits] |= mask;
  } else {
    words_[n / kBits] &= ~mask;
  }
}

void F2Series::flip_bit(std::size_t n) {
  if (n >= trunc_) throw ContractViolation("flip_bit beyond truncation");
  words_[n / kBits] ^= Word{1} << (n % kBits);
}

void F2Series::clear_tail() {
  words_.resize(words_for(trunc_), 0);
  if (trunc_ % kBits != 0) {
    words_.back() &= (Word{1} << (trunc_ % kBits)) - 1;
  }
}

std::int64_t F2Series::base_exponent() const {
  if (!integral_offset()) {
    throw ContractViolation("series offset is not a whole power of q");
  }
  return floor_div(offset24_, 24);
}

bool F2Series::coeff(std::int64_t e) const {
  const std::int64_t rel = e - base_exponent();
  if (rel < 0) return false;
  if (static_cast<std::size_t>(rel) >= trunc_) {
    throw ContractViolation("coefficient requested beyond the known horizon");
  }
  return bit(static_cast<std::size_t>(rel));
}

std::size_t F2Series::popcount() const {
  std::size_t c = 0;
  for (Word w : words_) c += static_cast<std::size_t>(std::popcount(w));
  return c;
}

std::vector<std::int64_t> F2Series::support() const {
  std::vector<std::int64_t> out;
  for (std::size_t w = 0; w < words_.size(); ++w) {
    Word word = words_[w];
    while (word != 0) {
      out.push_back(static_cast<std::int64_t>(w * kBits + static_cast<std::size_t>(std::countr_zero(word))));
      word &= word - 1;
    }
  }
  return out;
}

std::optional<std::size_t> F2Series::valuation() const {
  for (std::size_t w = 0; w < words_.size(); ++w) {
    if (words_[w] != 0) {
      return w * kBits + static_cast<std::size_t>(std::countr_zero(words_[w]));
    }
  }
  return std::nullopt;
}

F2Series F2Series::truncated(std::size_t new_trunc) const {
  if (new_trunc > trunc_) {
    throw ContractViolation("truncated: cannot extend the known horizon");
  }
  F2Series f = *this;
  f.trunc_ = new_trunc;
  f.clear_tail();
  return f;
}

F2Series F2Series::shifted(std::int64_t k) const {
  F2Series f = *this;
  f.offset24_ += 24 * k;
  return f;
}

F2Series F2Series::with_offset(std::int64_t offset24) const {
  F2Series f = *this;
  f.offset24_ = offset24;
  return f;
}

F2Series F2Series::rebased(std::int64_t new_offset24) const {
  const std::int64_t diff = offset24_ - new_offset24;
  if (diff < 0 || diff % 24 != 0) {
    throw ContractViolation("rebased: target offset must be lower by whole powers of q");
  }
  const auto shift = static_cast<std::size_t>(diff / 24);
  F2Series f(trunc_ + shift, new_offset24);
  xor_shifted(words_, shift, f.words_);
  return f;
}

std::string F2Series::to_string(std::size_t max_terms) const {
  std::ostringstream os;
  os << "q^(" << offset24_ << "/24)*(";
  std::size_t shown = 0;
  bool first = true;
  for (std::int64_t n : support()) {
    if (shown++ == max_terms) {
      os << " + ...";
      break;
    }
    os << (first ? "" : " + ") << "q^" << n;
    first = false;
  }
  if (first) os << "0";
  os << " + O(q^" << trunc_ << "))";
  return os.str();
}

namespace {
void require_same_fraction(const F2Series& f, const F2Series& g) {
  if (mod(f.offset24() - g.offset24(), 24) != 0) {
    throw ContractViolation("series offsets differ by a fractional power of q");
  }
}
}  // namespace

bool operator==(const F2Series& f, const F2Series& g) {
  require_same_fraction(f, g);
  return f.offset24_ == g.offset24_ && f.trunc_ == g.trunc_ &&
         f.words_ == g.words_;
}

F2Series operator+(const F2Series& f, const F2Series& g) {
  require_same_fraction(f, g);
  const std::int64_t low = std::min(f.offset24_, g.offset24_);
  F2Series a = f.rebased(low);
  const F2Series b = g.rebased(low);
  a.trunc_ = std::min(a.trunc_, b.trunc_);
  a.clear_tail();
  for (std::size_t i = 0; i < a.words_.size(); ++i) a.words_[i] ^= b.words_[i];
  return a;
}

F2Series operator*(const F2Series& f, const F2Series& g) {
  F2Series out;
  out.trunc_ = std::min(f.trunc_, g.trunc_);
  out.offset24_ = f.offset24_ + g.offset24_;
  out.words_ = truncated_product(f.words_, g.words_, out.trunc_);
  out.clear_tail();
  return out;
}

F2Series mul(const F2Series& f, const F2Series& g) { return f * g; }

F2Series add(const F2Series& f, const F2Series& g) { return f + g; }

F2Series inv(const F2Series& f) {
  if (f.trunc() == 0) return F2Series(0, -f.offset24());
  if (!f.bit(0)) throw ConstantTermZero("inv: constant term is zero");
  const F2Series unit = f.with_offset(0);
  // Over GF(2) the Newton step g <- g(2 - f g) collapses to g <- f g^2, and
  // g^2 is the Frobenius inflation of g.
  F2Series g = F2Series::one(1);
  while (g.trunc() < unit.trunc()) {
    const std::size_t next = std::min(2 * g.trunc(), unit.trunc());
    g = unit.truncated(next) * inflate(g, 2).truncated(next);
  }
  return g.with_offset(-f.offset24());
}

F2Series pow(const F2Series& f, std::int64_t e) {
  if (e == 0) return F2Series::one(f.trunc());
  if (e < 0) {
    if (f.trunc() > 0 && !f.bit(0)) {
      throw ConstantTermZero("pow: negative exponent needs constant term 1");
    }
    return inv(pow(f, -e));
  }
  // Each factor f(q^(2^i)) is known to 2^i times the horizon of f; the
  // product is known to the smallest such horizon.
  const std::int64_t low_scale = e & -e;
  const std::size_t target = f.trunc() * static_cast<std::size_t>(low_scale);
  std::optional<F2Series> acc;
  std::int64_t scale = 1;
  for (std::int64_t rest = e; rest != 0; rest >>= 1, scale <<= 1) {
    if ((rest & 1) == 0) continue;
    const auto us = static_cast<std::size_t>(scale);
    const std::size_t need = std::min(f.trunc(), (target + us - 1) / us);
    F2Series piece = inflate(f.truncated(need), scale);
    piece = piece.truncated(std::min(piece.trunc(), target));
    acc = acc ? (*acc * piece) : piece;
  }
  return *acc;
}

F2Series dissect(const F2Series& f, std::int64_t a, std::int64_t b) {
  if (a < 1 || b < 0 || b >= a) {
    throw BadResidue("dissect: residue must satisfy 0 <= b < a");
  }
  const std::int64_t v = f.base_exponent();
  const std::int64_t n0 = -floor_div(-(v - b), a);  // ceil((v - b) / a)
  const std::int64_t first = a * n0 + b - v;         // relative index
  const auto T = static_cast<std::int64_t>(f.trunc());
  const std::int64_t count = first >= T ? 0 : (T - first + a - 1) / a;
  if (a == 1) return f;
  F2Series out(static_cast<std::size_t>(count), 24 * n0);
  for (std::int64_t k = 0; k < count; ++k) {
    if (f.bit(static_cast<std::size_t>(first + a * k))) {
      out.set_bit(static_cast<std::size_t>(k));
    }
  }
  return out;
}

F2Series inflate(const F2Series& f, std::int64_t d) {
  if (d < 1) throw ContractViolation("inflate: factor must be positive");
  if (d == 1) return f;
  const auto ud = static_cast<std::size_t>(d);
  F2Series out(f.trunc() * ud, f.offset24() * d);
  for (std::int64_t n : f.support()) out.set_bit(static_cast<std::size_t>(n) * ud);
  return out;
}

std::vector<std::int64_t> generalized_pentagonals(std::int64_t limit) {
  std::vector<std::int64_t> out;
  for (std::int64_t k = 0;; ++k) {
    const std::int64_t plus = k * (3 * k - 1) / 2;
    const std::int64_t minus = k * (3 * k + 1) / 2;
    if (plus >= limit) break;
    out.push_back(plus);
    if (k > 0 && minus < limit) out.push_back(minus);
  }
  std::sort(out.begin(), out.end());
  return out;
}

F2Series euler(std::size_t trunc) {
  const auto pent = generalized_pentagonals(static_cast<std::int64_t>(trunc));
  return F2Series::from_indices(pent, trunc);
}

F2Series eta_power(std::int64_t delta, std::int64_t r, std::size_t trunc) {
  if (delta < 1) throw ContractViolation("eta_power: delta must be positive");
  const auto ud = static_cast<std::size_t>(delta);
  const std::size_t base_trunc = (trunc + ud - 1) / ud;
  const F2Series base = inflate(euler(base_trunc), delta).truncated(trunc);
  F2Series out = (r == 1) ? base : pow(base, r);
  return out.truncated(std::min(out.trunc(), trunc)).with_offset(delta * r);
}

std::optional<std::int64_t> first_mismatch(const F2Series& f,
                                           const F2Series& g) {
  require_same_fraction(f, g);
  const F2Series diff = f + g;
  const auto v = diff.valuation();
  if (!v) return std::nullopt;
  return diff.base_exponent() + static_cast<std::int64_t>(*v);
}

std::string range_hash(const F2Series& f, std::int64_t lo, std::int64_t hi) {
  std::uint64_t h = 1469598103934665603ULL;
  auto feed = [&](std::uint8_t byte) {
    h ^= byte;
    h *= 1099511628211ULL;
  };
  std::uint8_t current = 0;
  int filled = 0;
  for (std::int64_t e = lo; e <= hi; ++e) {
    if (f.coeff(e)) current |= static_cast<std::uint8_t>(1U << filled);
    if (++filled == 8) {
      feed(current);
      current = 0;
      filled = 0;
    }
  }
  if (filled > 0) feed(current);
  static const char* digits = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[static_cast<std::size_t>(i)] = digits[h & 0xF];
    h >>= 4;
  }
  return out;
}

}  // namespace pmod2
