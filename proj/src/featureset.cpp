#include "imclass/featureset.hpp"

#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "imclass/textio.hpp"

namespace imclass {

void save_featureset(std::ostream& out, const FeatureSet& fs) {
    out << "# featureset 1\n";
    out << "# arity " << fs.arity << '\n';
    if (!fs.segments.empty()) out << "# segments " << fs.segments << '\n';
    for (const Example& row : fs.rows) {
        out << row.id << '\t' << row.label << '\t';
        for (std::size_t i = 0; i < row.features.size(); ++i) {
            if (i) out << ' ';
            out << format_double(row.features[i]);
        }
        out << '\n';
    }
}

FeatureSet load_featureset(std::istream& in) {
    FeatureSet fs;
    std::string line;
    bool saw_version = false, saw_arity = false;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (line[0] == '#') {
            std::istringstream ss(line.substr(1));
            std::string key;
            ss >> key;
            if (key == "featureset") {
                std::string version;
                ss >> version;
                if (version != "1") throw std::runtime_error("unsupported feature file version");
                saw_version = true;
            } else if (key == "arity") {
                long long a = 0;
                std::string tok;
                ss >> tok;
                a = parse_int(tok);
                if (a < 1) throw std::runtime_error("feature arity must be positive");
                fs.arity = static_cast<int>(a);
                saw_arity = true;
            } else if (key == "segments") {
                std::string rest;
                std::getline(ss, rest);
                if (!rest.empty() && rest[0] == ' ') rest.erase(0, 1);
                fs.segments = rest;
            }
            continue;
        }
        if (!saw_version || !saw_arity)
            throw std::runtime_error("feature file is missing its header");

        const std::size_t tab1 = line.find('\t');
        const std::size_t tab2 = tab1 == std::string::npos ? std::string::npos
                                                           : line.find('\t', tab1 + 1);
        if (tab2 == std::string::npos)
            throw std::runtime_error("malformed feature row: '" + line + "'");

        Example row;
        row.id = parse_int(std::string_view(line).substr(0, tab1));
        row.label = static_cast<int>(parse_int(std::string_view(line).substr(tab1 + 1, tab2 - tab1 - 1)));
        std::istringstream values(line.substr(tab2 + 1));
        std::string tok;
        while (values >> tok) row.features.push_back(parse_double(tok));
        if (static_cast<int>(row.features.size()) != fs.arity)
            throw std::runtime_error("feature row arity mismatch");
        fs.rows.push_back(std::move(row));
    }
    if (!saw_version || !saw_arity)
        throw std::runtime_error("feature file is missing its header");
    return fs;
}

void export_libsvm(std::ostream& out, const FeatureSet& fs) {
    for (const Example& row : fs.rows) {
        out << row.label;
        for (std::size_t i = 0; i < row.features.size(); ++i)
            if (row.features[i] != 0.0)
                out << ' ' << (i + 1) << ':' << format_double(row.features[i]);
        out << '\n';
    }
}

}  // namespace imclass
