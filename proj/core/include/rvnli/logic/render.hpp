#pragma once

#include <string>

#include "rvnli/logic/formula.hpp"

namespace rvnli::logic {

enum class Dialect { Canonical, TptpFof, IsabelleInner };

// canonical re-parses to a structurally equal formula; tptp-fof compiles sorts into guard
// predicates; isabelle-inner uses the theory-file surface syntax.
std::string render_formula(const Formula& f, Dialect dialect = Dialect::Canonical);
std::string render_term(const Term& t, Dialect dialect = Dialect::Canonical);

// Symbol mangling used by the tptp-fof dialect.
std::string tptp_functor(const std::string& name);
std::string tptp_variable(const std::string& name);
std::string tptp_sort_guard(Sort s);
// Inverse of tptp_functor.
std::string untptp_functor(const std::string& name);
std::string untptp_variable(const std::string& name);

std::ostream& operator<<(std::ostream& os, const Formula& f);
std::ostream& operator<<(std::ostream& os, const Term& t);

}  // namespace rvnli::logic
