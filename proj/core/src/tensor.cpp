#include "latdual/tensor.hpp"

#include <algorithm>
#include <numeric>

namespace latdual {

namespace {

long long total_size(const std::vector<int>& dims) {
  long long s = 1;
  for (int d : dims) {
    if (d < 0) throw Error("negative tensor dimension");
    s *= d;
  }
  return s;
}

std::vector<long long> strides_of(const std::vector<int>& dims) {
  std::vector<long long> st(dims.size(), 1);
  for (int i = static_cast<int>(dims.size()) - 2; i >= 0; --i)
    st[i] = st[i + 1] * dims[i + 1];
  return st;
}

}  // namespace

Tensor::Tensor(std::vector<int> d) : dims(std::move(d)) { data.assign(total_size(dims), 0.0); }

Tensor Tensor::scalar(std::complex<double> v) {
  Tensor t{std::vector<int>{}};
  t.data.assign(1, v);
  return t;
}

std::complex<double>& Tensor::at(const std::vector<int>& idx) {
  auto st = strides_of(dims);
  long long off = 0;
  for (size_t i = 0; i < dims.size(); ++i) off += st[i] * idx[i];
  return data[off];
}

std::complex<double> Tensor::at(const std::vector<int>& idx) const {
  return const_cast<Tensor*>(this)->at(idx);
}

Tensor Tensor::conjugate() const {
  Tensor t = *this;
  for (auto& v : t.data) v = std::conj(v);
  return t;
}

Tensor Tensor::permute(const std::vector<int>& order) const {
  if (order.size() != dims.size()) throw Error("permute order size mismatch");
  std::vector<int> nd(order.size());
  for (size_t k = 0; k < order.size(); ++k) nd[k] = dims[order[k]];
  Tensor out(nd);
  auto src_st = strides_of(dims);
  auto dst_st = strides_of(nd);
  for (long long lin = 0; lin < size(); ++lin) {
    long long rem = lin;
    long long src_off = 0;
    for (size_t k = 0; k < nd.size(); ++k) {
      long long i = rem / dst_st[k];
      rem %= dst_st[k];
      src_off += src_st[order[k]] * i;
    }
    out.data[lin] = data[src_off];
  }
  return out;
}

Tensor Tensor::reverse_legs() const {
  std::vector<int> order(dims.size());
  for (size_t k = 0; k < dims.size(); ++k) order[k] = static_cast<int>(dims.size()) - 1 - k;
  return permute(order);
}

Tensor outer(const Tensor& a, const Tensor& b) {
  std::vector<int> nd = a.dims;
  nd.insert(nd.end(), b.dims.begin(), b.dims.end());
  Tensor out(nd);
  for (long long i = 0; i < a.size(); ++i)
    for (long long j = 0; j < b.size(); ++j) out.data[i * b.size() + j] = a.data[i] * b.data[j];
  return out;
}

Tensor contract(const Tensor& a, const Tensor& b,
                const std::vector<std::pair<int, int>>& pairs) {
  std::vector<char> a_used(a.dims.size(), 0), b_used(b.dims.size(), 0);
  for (auto [la, lb] : pairs) {
    if (a.dims[la] != b.dims[lb]) throw Error("contract: leg dimension mismatch");
    if (a_used[la] || b_used[lb]) throw Error("contract: leg used twice");
    a_used[la] = b_used[lb] = 1;
  }
  std::vector<int> a_free, b_free;
  for (size_t i = 0; i < a.dims.size(); ++i)
    if (!a_used[i]) a_free.push_back(static_cast<int>(i));
  for (size_t i = 0; i < b.dims.size(); ++i)
    if (!b_used[i]) b_free.push_back(static_cast<int>(i));

  std::vector<int> nd;
  for (int l : a_free) nd.push_back(a.dims[l]);
  for (int l : b_free) nd.push_back(b.dims[l]);
  Tensor out(nd);

  long long bond = 1;
  for (auto [la, lb] : pairs) bond *= a.dims[la];

  auto a_st = strides_of(a.dims), b_st = strides_of(b.dims);
  long long a_free_sz = 1, b_free_sz = 1;
  for (int l : a_free) a_free_sz *= a.dims[l];
  for (int l : b_free) b_free_sz *= b.dims[l];

  for (long long ia = 0; ia < a_free_sz; ++ia) {
    long long a_base = 0, rem = ia;
    for (size_t k = 0; k < a_free.size(); ++k) {
      long long st = 1;
      for (size_t m = k + 1; m < a_free.size(); ++m) st *= a.dims[a_free[m]];
      long long i = rem / st;
      rem %= st;
      a_base += a_st[a_free[k]] * i;
    }
    for (long long ib = 0; ib < b_free_sz; ++ib) {
      long long b_base = 0;
      rem = ib;
      for (size_t k = 0; k < b_free.size(); ++k) {
        long long st = 1;
        for (size_t m = k + 1; m < b_free.size(); ++m) st *= b.dims[b_free[m]];
        long long i = rem / st;
        rem %= st;
        b_base += b_st[b_free[k]] * i;
      }
      std::complex<double> acc = 0;
      for (long long c = 0; c < bond; ++c) {
        long long a_off = a_base, b_off = b_base, crem = c;
        for (size_t k = 0; k < pairs.size(); ++k) {
          long long st = 1;
          for (size_t m = k + 1; m < pairs.size(); ++m) st *= a.dims[pairs[m].first];
          long long i = crem / st;
          crem %= st;
          a_off += a_st[pairs[k].first] * i;
          b_off += b_st[pairs[k].second] * i;
        }
        acc += a.data[a_off] * b.data[b_off];
      }
      out.data[ia * b_free_sz + ib] += acc;
    }
  }
  return out;
}

Tensor self_contract(const Tensor& a, int leg1, int leg2) {
  if (a.dims[leg1] != a.dims[leg2]) throw Error("self_contract: dimension mismatch");
  std::vector<int> free_legs;
  for (int i = 0; i < a.rank(); ++i)
    if (i != leg1 && i != leg2) free_legs.push_back(i);
  std::vector<int> nd;
  for (int l : free_legs) nd.push_back(a.dims[l]);
  Tensor out(nd);
  auto a_st = strides_of(a.dims);
  long long free_sz = out.size();
  for (long long io = 0; io < free_sz; ++io) {
    long long base = 0, rem = io;
    for (size_t k = 0; k < free_legs.size(); ++k) {
      long long st = 1;
      for (size_t m = k + 1; m < free_legs.size(); ++m) st *= a.dims[free_legs[m]];
      long long i = rem / st;
      rem %= st;
      base += a_st[free_legs[k]] * i;
    }
    std::complex<double> acc = 0;
    for (int c = 0; c < a.dims[leg1]; ++c) acc += a.data[base + a_st[leg1] * c + a_st[leg2] * c];
    out.data[io] = acc;
  }
  return out;
}

std::complex<double> dot_conj(const Tensor& a, const Tensor& b) {
  if (a.dims != b.dims) throw Error("dot_conj: shape mismatch");
  std::complex<double> acc = 0;
  for (long long i = 0; i < a.size(); ++i) acc += std::conj(a.data[i]) * b.data[i];
  return acc;
}

}  // namespace latdual
