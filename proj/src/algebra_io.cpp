#include "exactfa/algebra_io.hpp"

#include "exactfa/errors.hpp"

namespace exactfa {

nlohmann::json ideal_to_json(const Ideal& I, const std::vector<std::string>& vars,
                             const std::string& order_tag) {
    if (static_cast<int>(vars.size()) != I.arity)
        throw StructuralError("ideal_to_json: variable list arity mismatch");
    nlohmann::json doc;
    doc["vars"] = vars;
    doc["order"] = order_tag;
    nlohmann::json gens = nlohmann::json::array();
    for (const auto& g : I.generators) gens.push_back(poly_str(g, vars));
    doc["generators"] = gens;
    return doc;
}

Ideal ideal_from_json(const nlohmann::json& doc, std::vector<std::string>* vars_out) {
    std::vector<std::string> vars = doc.at("vars").get<std::vector<std::string>>();
    std::vector<Polynomial> gens;
    for (const auto& s : doc.at("generators")) gens.push_back(poly_parse(s.get<std::string>(), vars));
    if (vars_out != nullptr) *vars_out = vars;
    return Ideal(static_cast<int>(vars.size()), std::move(gens));
}

nlohmann::json basis_to_json(const GroebnerBasis& G, const std::vector<std::string>& vars) {
    nlohmann::json doc;
    doc["vars"] = vars;
    doc["order"] = G.order.kind == OrderKind::Lex ? "lex" : "grevlex";
    nlohmann::json elems = nlohmann::json::array();
    for (const auto& g : G.elements) elems.push_back(poly_str(g, vars));
    doc["elements"] = elems;
    doc["reduced"] = G.reduced;
    switch (G.zero_dimensional) {
        case ZeroDimFlag::Yes: doc["zero_dimensional"] = true; break;
        case ZeroDimFlag::No: doc["zero_dimensional"] = false; break;
        case ZeroDimFlag::Unknown: doc["zero_dimensional"] = nullptr; break;
    }
    return doc;
}

} // namespace exactfa
