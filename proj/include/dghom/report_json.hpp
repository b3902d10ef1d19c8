#pragma once

#include <json.hpp>

#include "dghom/instance.hpp"
#include "dghom/lifting.hpp"

namespace dghom {

// JSON forms of the reports, shared by the command line tool and the tests
// that pin the schema. Keys are fixed: a report of a given kind always
// carries the same keys, with null standing in for absent witnesses.

nlohmann::json json_hom(const GradedHom& f);
nlohmann::json json_connection(const Connection& c);
nlohmann::json json_derivation(const Derivation& d);
nlohmann::json json_certificate(const HomotopyCertificate& c);
nlohmann::json json_checks(const std::vector<CheckLine>& checks);

nlohmann::json json_validation(const ValidationReport& rep);

// keys: verdict, witness_f, witness_psi, certificate, checks
nlohmann::json json_lift(const LiftReport& rep);

// keys: verdict, conditions, naive_liftable, witness_fbar, witness_psi,
// psi_from_kappa, h_table, certificates, checks
nlohmann::json json_fes(const FesReport& rep);

// keys: verdict, rows, detail
nlohmann::json json_exactseq(const FundamentalSequenceReport& rep);

// keys: verdict, lifting_checked, consistent, checks
nlohmann::json json_h0nu(const H0NuReport& rep);

// keys: verdict, along, degree, images, checks
nlohmann::json json_atiyah(const LiftContext& ctx, bool classical);

// keys: name, derivation, kappa
nlohmann::json json_ks(const std::string& name, const KodairaSpencerValue& v);

// keys: algebra, generators, differentials
nlohmann::json json_omega(const EnvelopingAlgebra& env, const DifferentialModule& om);

} // namespace dghom
