#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "imclass/dataview.hpp"

namespace imclass {

// Line-oriented feature file: '#'-prefixed header (version, arity, segment
// layout), then one "id<TAB>label<TAB>v1 v2 ..." row per example. Values are
// written with round-trip precision, so write -> read -> write is
// byte-identical.
struct FeatureSet {
    int arity = 0;
    std::string segments;  // e.g. "scalable_color:256 ..."; may be empty
    std::vector<Example> rows;
};

void save_featureset(std::ostream& out, const FeatureSet& fs);
FeatureSet load_featureset(std::istream& in);

// One line per example in sparse "label index:value" form with 1-based
// indices; zero-valued features are omitted.
void export_libsvm(std::ostream& out, const FeatureSet& fs);

}  // namespace imclass
