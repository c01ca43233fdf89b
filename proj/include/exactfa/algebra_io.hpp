#ifndef EXACTFA_ALGEBRA_IO_HPP
#define EXACTFA_ALGEBRA_IO_HPP

#include <string>
#include <vector>

#include <json.hpp>

#include "exactfa/groebner.hpp"

namespace exactfa {

// Ideals and bases serialize as lists of polynomial strings in the plain
// text format, together with the variable names and an order tag.
nlohmann::json ideal_to_json(const Ideal& I, const std::vector<std::string>& vars,
                             const std::string& order_tag);
Ideal ideal_from_json(const nlohmann::json& doc, std::vector<std::string>* vars_out = nullptr);

nlohmann::json basis_to_json(const GroebnerBasis& G, const std::vector<std::string>& vars);

} // namespace exactfa

#endif
