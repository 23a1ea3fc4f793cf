#pragma once

#include <string>

#include <json.hpp>

#include "sinefactor/expsum.hpp"
#include "sinefactor/factorize.hpp"
#include "sinefactor/generate.hpp"
#include "sinefactor/hexpansion.hpp"
#include "sinefactor/quasicrystal.hpp"
#include "sinefactor/rootfind.hpp"

namespace sinefactor {

using Json = nlohmann::json;

Json to_json(const ExpSum& q);
ExpSum expsum_from_json(const Json& j, mpfr_prec_t precision = Real::kDefaultPrec);

Json to_json(const HExpansion& h);
Json to_json(const GrowthReport& g);
Json to_json(const MeyerReport& m);
Json to_json(const ZeroSet& z);
Json to_json(const CertifyReport& c);
Json to_json(const AtomicMeasure& m);
Json to_json(const DiffractionReport& d);
Json to_json(const SineProductForm& f);
Json to_json(const ProgressionSet& p);
Json to_json(const ConsistencyReport& c);
Json to_json(const VerifyReport& v);
Json to_json(const SecularSpec& s);
SecularSpec secular_spec_from_json(const Json& j);

std::string growth_csv(const GrowthReport& g);
std::string zeros_csv(const ZeroSet& z);
std::string diffraction_csv(const DiffractionReport& d);
std::string plot_data(const AtomicMeasure& m);  // "gamma |mass|" per line

}  // namespace sinefactor
