#include "koszul/matrix.hpp"

#include <algorithm>

namespace koszul {

const char* error_code_name(ErrorCode c) {
    switch (c) {
        case ErrorCode::parse_error: return "parse_error";
        case ErrorCode::arity_mismatch: return "arity_mismatch";
        case ErrorCode::weight_homogeneity: return "weight_homogeneity";
        case ErrorCode::relation_space: return "relation_space";
        case ErrorCode::dimension_mismatch: return "dimension_mismatch";
        case ErrorCode::containment: return "containment";
        case ErrorCode::index_out_of_range: return "index_out_of_range";
        case ErrorCode::truncation: return "truncation";
        case ErrorCode::unsupported_presentation: return "unsupported_presentation";
        case ErrorCode::structural: return "structural";
        case ErrorCode::internal_consistency: return "internal_consistency";
        case ErrorCode::unknown_preset: return "unknown_preset";
        case ErrorCode::io_error: return "io_error";
    }
    return "error";
}

Rat rat_parse(const std::string& s) {
    if (s.empty()) fail(ErrorCode::parse_error, "empty rational literal");
    std::string t = s;
    // mpq_class's string constructor accepts "p/q"; validate characters first
    // so garbage gets a dedicated error instead of a GMP abort.
    size_t slash = std::string::npos;
    for (size_t i = 0; i < t.size(); ++i) {
        char c = t[i];
        if (c == '/') {
            if (slash != std::string::npos) fail(ErrorCode::parse_error, "bad rational: " + s);
            slash = i;
        } else if (!(std::isdigit(static_cast<unsigned char>(c)) ||
                     ((c == '-' || c == '+') && (i == 0 || i == slash + 1)))) {
            fail(ErrorCode::parse_error, "bad rational: " + s);
        }
    }
    if (slash == 0 || slash == t.size() - 1) fail(ErrorCode::parse_error, "bad rational: " + s);
    try {
        Rat q(t);
        if (slash != std::string::npos && sgn(q.get_den()) == 0)
            fail(ErrorCode::parse_error, "zero denominator: " + s);
        q.canonicalize();
        return q;
    } catch (const std::invalid_argument&) {
        fail(ErrorCode::parse_error, "bad rational: " + s);
    }
}

std::string rat_str(const Rat& q) { return q.get_str(); }

void vec_axpy(SparseVec& y, const Rat& a, const SparseVec& x) {
    if (is_zero(a)) return;
    for (const auto& [i, v] : x) {
        auto it = y.find(i);
        if (it == y.end()) {
            Rat w = a * v;
            if (!is_zero(w)) y.emplace(i, std::move(w));
        } else {
            it->second += a * v;
            if (is_zero(it->second)) y.erase(it);
        }
    }
}

Rat vec_dot(const SparseVec& a, const SparseVec& b) {
    Rat s = 0;
    auto ia = a.begin();
    auto ib = b.begin();
    while (ia != a.end() && ib != b.end()) {
        if (ia->first < ib->first) ++ia;
        else if (ib->first < ia->first) ++ib;
        else {
            s += ia->second * ib->second;
            ++ia;
            ++ib;
        }
    }
    return s;
}

SparseVec vec_scale(const SparseVec& x, const Rat& a) {
    SparseVec y;
    if (is_zero(a)) return y;
    for (const auto& [i, v] : x) y.emplace(i, a * v);
    return y;
}

Matrix Matrix::identity(int n) {
    Matrix m(n, n);
    for (int i = 0; i < n; ++i) m.set(i, i, 1);
    return m;
}

Rat Matrix::get(int r, int c) const {
    auto it = data_[r].find(c);
    return it == data_[r].end() ? Rat(0) : it->second;
}

void Matrix::set(int r, int c, const Rat& v) {
    if (r < 0 || r >= rows_ || c < 0 || c >= cols_)
        fail(ErrorCode::index_out_of_range, "matrix entry out of bounds");
    if (is_zero(v)) data_[r].erase(c);
    else data_[r][c] = v;
}

void Matrix::add(int r, int c, const Rat& v) {
    if (is_zero(v)) return;
    auto it = data_[r].find(c);
    if (it == data_[r].end()) set(r, c, v);
    else {
        it->second += v;
        if (is_zero(it->second)) data_[r].erase(it);
    }
}

int Matrix::nnz() const {
    int n = 0;
    for (const auto& r : data_) n += static_cast<int>(r.size());
    return n;
}

bool Matrix::zero() const {
    for (const auto& r : data_)
        if (!r.empty()) return false;
    return true;
}

Matrix Matrix::transpose() const {
    Matrix t(cols_, rows_);
    for (int r = 0; r < rows_; ++r)
        for (const auto& [c, v] : data_[r]) t.data_[c][r] = v;
    return t;
}

Matrix Matrix::operator*(const Matrix& other) const {
    if (cols_ != other.rows_) fail(ErrorCode::dimension_mismatch, "matrix product shape mismatch");
    Matrix out(rows_, other.cols_);
    for (int r = 0; r < rows_; ++r) {
        SparseVec& orow = out.data_[r];
        for (const auto& [k, v] : data_[r]) vec_axpy(orow, v, other.data_[k]);
    }
    return out;
}

Matrix Matrix::operator+(const Matrix& other) const {
    if (rows_ != other.rows_ || cols_ != other.cols_)
        fail(ErrorCode::dimension_mismatch, "matrix sum shape mismatch");
    Matrix out = *this;
    for (int r = 0; r < rows_; ++r) vec_axpy(out.data_[r], Rat(1), other.data_[r]);
    return out;
}

Matrix Matrix::operator-(const Matrix& other) const {
    if (rows_ != other.rows_ || cols_ != other.cols_)
        fail(ErrorCode::dimension_mismatch, "matrix difference shape mismatch");
    Matrix out = *this;
    for (int r = 0; r < rows_; ++r) vec_axpy(out.data_[r], Rat(-1), other.data_[r]);
    return out;
}

Matrix Matrix::scaled(const Rat& a) const {
    Matrix out(rows_, cols_);
    for (int r = 0; r < rows_; ++r) out.data_[r] = vec_scale(data_[r], a);
    return out;
}

bool Matrix::operator==(const Matrix& other) const {
    return rows_ == other.rows_ && cols_ == other.cols_ && data_ == other.data_;
}

SparseVec Matrix::apply(const SparseVec& x) const {
    SparseVec y;
    for (int r = 0; r < rows_; ++r) {
        Rat s = vec_dot(data_[r], x);
        if (!is_zero(s)) y.emplace(r, std::move(s));
    }
    return y;
}

SparseVec Matrix::apply_transposed(const SparseVec& x) const {
    SparseVec y;
    for (const auto& [r, v] : x) vec_axpy(y, v, data_[r]);
    return y;
}

Matrix Matrix::vstack(const Matrix& below) const {
    if (cols_ != below.cols_) fail(ErrorCode::dimension_mismatch, "vstack column mismatch");
    Matrix out(rows_ + below.rows_, cols_);
    for (int r = 0; r < rows_; ++r) out.data_[r] = data_[r];
    for (int r = 0; r < below.rows_; ++r) out.data_[rows_ + r] = below.data_[r];
    return out;
}

RrefResult rref(const Matrix& m) {
    std::vector<SparseVec> rows;
    rows.reserve(m.rows());
    for (int r = 0; r < m.rows(); ++r)
        if (!m.row(r).empty()) rows.push_back(m.row(r));

    std::vector<SparseVec> done;
    std::vector<int> done_pivots;

    while (true) {
        // column fill counts over the active rows
        std::map<int, int> colcount;
        for (const auto& r : rows)
            for (const auto& [c, v] : r) colcount[c]++;
        if (rows.empty()) break;

        long best_score = -1;
        int best_row = -1, best_col = -1;
        for (size_t i = 0; i < rows.size(); ++i) {
            long rnnz = static_cast<long>(rows[i].size());
            for (const auto& [c, v] : rows[i]) {
                long score = (rnnz - 1) * (colcount[c] - 1);
                if (best_score < 0 || score < best_score ||
                    (score == best_score && c < best_col)) {
                    best_score = score;
                    best_row = static_cast<int>(i);
                    best_col = c;
                }
            }
        }

        SparseVec pivot = std::move(rows[best_row]);
        rows.erase(rows.begin() + best_row);
        Rat inv = 1 / pivot[best_col];
        if (inv != 1) pivot = vec_scale(pivot, inv);

        for (auto& r : rows) {
            auto it = r.find(best_col);
            if (it != r.end()) {
                Rat f = -it->second;
                vec_axpy(r, f, pivot);
            }
        }
        for (auto& r : done) {
            auto it = r.find(best_col);
            if (it != r.end()) {
                Rat f = -it->second;
                vec_axpy(r, f, pivot);
            }
        }
        done.push_back(std::move(pivot));
        done_pivots.push_back(best_col);

        // drop rows eliminated to zero
        std::vector<SparseVec> keep;
        keep.reserve(rows.size());
        for (auto& r : rows)
            if (!r.empty()) keep.push_back(std::move(r));
        rows = std::move(keep);
    }

    // Markowitz pivots control fill but may skip leftmost columns; a second
    // left-to-right pass on the independent rows restores the unique RREF.
    std::vector<SparseVec> canon;
    std::vector<int> canon_pivots;
    std::vector<bool> used(done.size(), false);
    for (size_t step = 0; step < done.size(); ++step) {
        int best = -1;
        for (size_t i = 0; i < done.size(); ++i) {
            if (used[i] || done[i].empty()) continue;
            if (best < 0 || done[i].begin()->first < done[best].begin()->first) best = static_cast<int>(i);
        }
        if (best < 0) break;
        used[best] = true;
        SparseVec piv = std::move(done[best]);
        int pcol = piv.begin()->first;
        Rat inv = 1 / piv.begin()->second;
        if (inv != 1) piv = vec_scale(piv, inv);
        for (size_t i = 0; i < done.size(); ++i) {
            if (used[i]) continue;
            auto it = done[i].find(pcol);
            if (it != done[i].end()) {
                Rat f = -it->second;
                vec_axpy(done[i], f, piv);
            }
        }
        for (auto& r : canon) {
            auto it = r.find(pcol);
            if (it != r.end()) {
                Rat f = -it->second;
                vec_axpy(r, f, piv);
            }
        }
        canon.push_back(std::move(piv));
        canon_pivots.push_back(pcol);
    }

    std::vector<int> order(canon.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
    std::sort(order.begin(), order.end(),
              [&](int a, int b) { return canon_pivots[a] < canon_pivots[b]; });

    RrefResult res;
    res.rank = static_cast<int>(canon.size());
    res.mat = Matrix(res.rank, m.cols());
    res.pivots.resize(res.rank);
    for (int i = 0; i < res.rank; ++i) {
        res.mat.row(i) = std::move(canon[order[i]]);
        res.pivots[i] = canon_pivots[order[i]];
    }
    return res;
}

RankKernelImage rank_kernel_image(const Matrix& m) {
    RankKernelImage out;
    RrefResult r = rref(m);
    out.rank = r.rank;

    // kernel from the RREF of m: free columns parametrize solutions
    std::vector<bool> is_pivot(m.cols(), false);
    for (int p : r.pivots) is_pivot[p] = true;
    std::vector<int> free_cols;
    for (int c = 0; c < m.cols(); ++c)
        if (!is_pivot[c]) free_cols.push_back(c);

    Matrix kgen(static_cast<int>(free_cols.size()), m.cols());
    for (size_t i = 0; i < free_cols.size(); ++i) {
        int f = free_cols[i];
        kgen.set(static_cast<int>(i), f, 1);
        for (int row = 0; row < r.rank; ++row) {
            Rat v = r.mat.get(row, f);
            if (!is_zero(v)) kgen.set(static_cast<int>(i), r.pivots[row], -v);
        }
    }
    out.kernel = rref(kgen).mat;
    out.image = rref(m.transpose()).mat;
    return out;
}

int rank_of(const Matrix& m) { return rref(m).rank; }

} // namespace koszul
