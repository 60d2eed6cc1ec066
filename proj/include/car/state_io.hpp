#pragma once

#include <iosfwd>
#include <string>

#include "car/state_density.hpp"
#include "car/states.hpp"

namespace car {

/// Matrix literal: "dim <d>" then d rows of d complex entries "re+imj".
void write_matrix_literal(std::ostream& out, const Matrix& m);
Matrix read_matrix_literal(std::istream& in);

/// State file: "n=<ambient>" and "region=<list>" header lines, then the matrix
/// literal of the compressed tau-normalized density.
struct StateFilePayload {
    int ambient;
    ModeSet region;
    Matrix compressed;
};

void write_state_payload(std::ostream& out, const StateFilePayload& payload);
void write_state_payload(const std::string& path, const StateFilePayload& payload);
StateFilePayload read_state_payload(std::istream& in);
StateFilePayload read_state_payload(const std::string& path);

void write_state_file(std::ostream& out, const StateDensity& state);
void write_state_file(const std::string& path, const StateDensity& state);
StateDensity read_state_file(std::istream& in, const StateValidationOptions& opts = {});
StateDensity read_state_file(const std::string& path, const StateValidationOptions& opts = {});

/// Mixture family file: "regions I=<list> J=<list> n=<int>" then per term a
/// "term w=<float>" line followed by m1=/m2=/m3= marginal constructors
/// (tracial | pure <monomial> | random <seed> | file <path>).
MixtureSpec read_prop4_spec_file(const std::string& path);

/// Monomial family file: the regions line, one global "Cplus=<monomial>" line and
/// "term alpha=<float> A=<monomial> B=<monomial> K=<list>" lines.
Prop5Spec read_prop5_spec_file(const std::string& path);

} // namespace car
