#pragma once

#include <iosfwd>
#include <string>

#include "polya/lda.hpp"

namespace polya {

// Text model format, version 1:
//   ldamodel v1 variant=<lda|lda_gn> K=<k> V=<v> M=<m>
//   alpha: <k floats>
//   beta: <v floats>
//   <K lines of V floats>   phi
//   <M lines of K floats>   theta
//   <V lines>               vocabulary, one term per line in id order
// Floats use shortest round-trip formatting.

void write_model(std::ostream& out, const TrainedModel& model);
void save_model(const std::string& path, const TrainedModel& model);

TrainedModel read_model(std::istream& in);
TrainedModel load_model(const std::string& path);

}  // namespace polya
