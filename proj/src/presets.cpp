#include "koszul/presets.hpp"

namespace koszul {

namespace {

TreeNode leaf(int l) { return TreeNode::leaf_node(l); }

TreeNode left_comb(int x, int y, int z) {
    return TreeNode::vertex(0, 0, {TreeNode::vertex(0, 0, {leaf(x), leaf(y)}), leaf(z)});
}

TreeNode right_comb(int x, int y, int z) {
    return TreeNode::vertex(0, 0, {leaf(x), TreeNode::vertex(0, 0, {leaf(y), leaf(z)})});
}

} // namespace

OperadPresentation preset_as(int max_arity) {
    OperadPresentation p;
    p.name = "as";
    p.max_arity = max_arity;
    p.generators = {GeneratorSymbol::regular("m")};
    const SModule& e = p.generators;
    // associativity m(m(1,2),3) = m(1,m(2,3)); its symmetric closure spans the
    // 6-dimensional relation space of the regular representation
    OperadElement assoc(3);
    assoc += canonicalize(e, left_comb(1, 2, 3));
    assoc += canonicalize(e, right_comb(1, 2, 3)).scaled(-1);
    p.relations[3].push_back(assoc);
    return p;
}

OperadPresentation preset_com(int max_arity) {
    OperadPresentation p;
    p.name = "com";
    p.max_arity = max_arity;
    p.generators = {GeneratorSymbol::trivial("m")};
    const SModule& e = p.generators;
    OperadElement assoc(3);
    assoc += canonicalize(e, left_comb(1, 2, 3));
    assoc += canonicalize(e, right_comb(1, 2, 3)).scaled(-1);
    p.relations[3].push_back(assoc);
    return p;
}

OperadPresentation preset_lie(int max_arity) {
    OperadPresentation p;
    p.name = "lie";
    p.max_arity = max_arity;
    p.generators = {GeneratorSymbol::sign("b")};
    const SModule& e = p.generators;
    // Jacobi in shuffle form: b(b(1,2),3) - b(b(1,3),2) - b(1,b(2,3)) = 0
    OperadElement jac(3);
    jac += canonicalize(e, left_comb(1, 2, 3));
    jac += canonicalize(e, TreeNode::vertex(
                               0, 0, {TreeNode::vertex(0, 0, {leaf(1), leaf(3)}), leaf(2)}))
               .scaled(-1);
    jac += canonicalize(e, right_comb(1, 2, 3)).scaled(-1);
    p.relations[3].push_back(jac);
    return p;
}

OperadPresentation load_preset(const std::string& name, int max_arity) {
    if (name == "as") return preset_as(max_arity);
    if (name == "com") return preset_com(max_arity);
    if (name == "lie") return preset_lie(max_arity);
    fail(ErrorCode::unknown_preset, "unknown operad preset: " + name);
}

} // namespace koszul
