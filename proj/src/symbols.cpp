#include "koszul/symbols.hpp"

namespace koszul {

GeneratorSymbol GeneratorSymbol::trivial(const std::string& name, int arity, int degree) {
    GeneratorSymbol g;
    g.name = name;
    g.arity = arity;
    g.degree = degree;
    g.dim = 1;
    for (int i = 0; i + 1 < arity; ++i) g.transpositions.push_back(Matrix::identity(1));
    return g;
}

GeneratorSymbol GeneratorSymbol::sign(const std::string& name, int degree) {
    GeneratorSymbol g;
    g.name = name;
    g.arity = 2;
    g.degree = degree;
    g.dim = 1;
    Matrix m(1, 1);
    m.set(0, 0, -1);
    g.transpositions.push_back(m);
    return g;
}

GeneratorSymbol GeneratorSymbol::regular(const std::string& name, int degree) {
    GeneratorSymbol g;
    g.name = name;
    g.arity = 2;
    g.degree = degree;
    g.dim = 2;
    Matrix m(2, 2);
    m.set(0, 1, 1);
    m.set(1, 0, 1);
    g.transpositions.push_back(m);
    return g;
}

Matrix GeneratorSymbol::action(const Perm& sigma) const {
    if (static_cast<int>(sigma.size()) != arity)
        fail(ErrorCode::arity_mismatch, "action: permutation size != arity of " + name);
    Matrix m = Matrix::identity(dim);
    // Right action: M(sigma * tau) = M(tau) * M(sigma); for a word sigma = s_a o s_b o ...
    // (functions), M(sigma) = M(s_last) * ... * M(s_a)? Composition handled by
    // multiplying on the left while walking the word.
    for (int i : adjacent_word(sigma)) m = transpositions[i] * m;
    return m;
}

void GeneratorSymbol::validate() const {
    if (arity < 1) fail(ErrorCode::unsupported_presentation, "generator arity must be >= 1: " + name);
    if (static_cast<int>(transpositions.size()) != arity - 1)
        fail(ErrorCode::structural, "generator " + name + ": wrong number of action matrices");
    Matrix id = Matrix::identity(dim);
    for (int i = 0; i + 1 < arity; ++i) {
        const Matrix& t = transpositions[i];
        if (t.rows() != dim || t.cols() != dim)
            fail(ErrorCode::structural, "generator " + name + ": action matrix shape");
        if (!(t * t == id))
            fail(ErrorCode::structural, "generator " + name + ": s_i not an involution");
        if (i + 2 < arity) {
            const Matrix& u = transpositions[i + 1];
            if (!(t * u * t == u * t * u))
                fail(ErrorCode::structural, "generator " + name + ": braid relation fails");
        }
        for (int j = i + 2; j + 1 < arity; ++j) {
            const Matrix& u = transpositions[j];
            if (!(t * u == u * t))
                fail(ErrorCode::structural, "generator " + name + ": commuting relation fails");
        }
    }
}

SModule suspend(const SModule& e) {
    SModule s = e;
    for (auto& g : s) g.degree += 1;
    return s;
}

SModule sign_twisted_dual(const SModule& e) {
    SModule d = e;
    for (auto& g : d) {
        g.name += "*";
        for (auto& t : g.transpositions) {
            // transpositions are involutions, so inverse-transpose = transpose
            t = t.transpose().scaled(-1);
        }
    }
    return d;
}

} // namespace koszul
