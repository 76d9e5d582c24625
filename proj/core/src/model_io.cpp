#include "anyon/model_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <vector>

namespace anyon {

namespace {

struct Record {
    int line;
    std::vector<std::string> tokens;
};

std::vector<Record> tokenize(std::string_view text) {
    std::vector<Record> records;
    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t eol = text.find('\n', pos);
        std::string_view line =
            text.substr(pos, (eol == std::string_view::npos ? text.size() : eol) - pos);
        ++line_no;
        pos = (eol == std::string_view::npos) ? text.size() + 1 : eol + 1;

        if (const auto hash = line.find('#'); hash != std::string_view::npos)
            line = line.substr(0, hash);
        std::istringstream is{std::string(line)};
        std::vector<std::string> tokens;
        for (std::string tok; is >> tok;) tokens.push_back(std::move(tok));
        if (!tokens.empty()) records.push_back({line_no, std::move(tokens)});
    }
    return records;
}

double parse_number(const Record& rec, const std::string& tok) {
    try {
        std::size_t used = 0;
        const double v = std::stod(tok, &used);
        if (used != tok.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw parse_error(rec.line, "expected a number, got '" + tok + "'");
    }
}

long parse_int(const Record& rec, const std::string& tok) {
    try {
        std::size_t used = 0;
        const long v = std::stol(tok, &used);
        if (used != tok.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw parse_error(rec.line, "expected an integer, got '" + tok + "'");
    }
}

void expect_tokens(const Record& rec, std::size_t n) {
    if (rec.tokens.size() != n)
        throw parse_error(rec.line, "'" + rec.tokens[0] + "' record needs " +
                                        std::to_string(n - 1) + " fields, got " +
                                        std::to_string(rec.tokens.size() - 1));
}

}  // namespace

std::string format_double(double value) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.17g", value);
    return buf;
}

std::string serialize_model(const AnyonModel& model) {
    const FusionRules& rules = model.rules;
    const int nc = rules.charge_count();
    std::ostringstream os;
    os << "anyonmodel 1\n";
    os << "name " << model.name << "\n";
    os << "charges";
    for (const auto& c : rules.charges()) os << " " << c;
    os << "\n";
    os << "vacuum " << rules.label(rules.vacuum()) << "\n";
    for (int a = 0; a < nc; ++a) os << "dual " << rules.label(a) << " "
                                    << rules.label(rules.dual(a)) << "\n";
    for (int a = 0; a < nc; ++a)
        for (int b = a; b < nc; ++b)
            for (int c = 0; c < nc; ++c)
                if (const int n = rules.n(a, b, c); n > 0)
                    os << "fusion " << rules.label(a) << " " << rules.label(b) << " "
                       << rules.label(c) << " " << n << "\n";
    for (int a = 0; a < nc; ++a)
        os << "dim " << rules.label(a) << " " << format_double(model.dims[a]) << "\n";
    for (const auto& [labels, block] : model.f.blocks()) {
        for (std::size_t r = 0; r < block.rows.size(); ++r)
            for (std::size_t c = 0; c < block.cols.size(); ++c) {
                const Complex v = block.m(static_cast<Eigen::Index>(r),
                                          static_cast<Eigen::Index>(c));
                os << "fsymbol " << rules.label(labels[0]) << " " << rules.label(labels[1]) << " "
                   << rules.label(labels[2]) << " " << rules.label(labels[3]) << " "
                   << rules.label(block.rows[r].charge) << " " << block.rows[r].first << " "
                   << block.rows[r].second << " " << rules.label(block.cols[c].charge) << " "
                   << block.cols[c].first << " " << block.cols[c].second << " "
                   << format_double(v.real()) << " " << format_double(v.imag()) << "\n";
            }
    }
    if (model.twists) {
        for (int a = 0; a < nc; ++a) {
            const Complex t = (*model.twists)[static_cast<std::size_t>(a)];
            os << "twist " << rules.label(a) << " " << format_double(t.real()) << " "
               << format_double(t.imag()) << "\n";
        }
    }
    if (model.s_matrix) {
        for (int a = 0; a < nc; ++a) {
            os << "smatrix " << rules.label(a);
            for (int b = 0; b < nc; ++b)
                os << " " << format_double((*model.s_matrix)(a, b).real()) << " "
                   << format_double((*model.s_matrix)(a, b).imag());
            os << "\n";
        }
    }
    return os.str();
}

AnyonModel parse_model(std::string_view text, bool run_validation) {
    const auto records = tokenize(text);
    if (records.empty()) throw parse_error(0, "empty model file");
    {
        const Record& head = records.front();
        if (head.tokens[0] != "anyonmodel")
            throw parse_error(head.line, "model files must start with 'anyonmodel 1'");
        expect_tokens(head, 2);
        if (head.tokens[1] != "1")
            throw parse_error(head.line, "unsupported model file version '" + head.tokens[1] + "'");
    }

    std::string name;
    std::vector<std::string> charges;
    std::string vacuum;
    std::vector<std::pair<std::string, std::string>> duals;
    std::map<std::array<std::string, 3>, unsigned> fusion;
    std::map<std::string, double> given_dims;
    struct FEntry {
        int line;
        std::array<std::string, 4> block;
        std::array<std::string, 2> inter;
        std::array<int, 4> verts;
        Complex value;
    };
    std::vector<FEntry> fentries;
    std::map<std::string, Complex> given_twists;
    std::map<std::string, std::vector<Complex>> given_s_rows;

    bool saw_name = false, saw_charges = false, saw_vacuum = false;
    for (std::size_t i = 1; i < records.size(); ++i) {
        const Record& rec = records[i];
        const std::string& kind = rec.tokens[0];
        if (kind == "name") {
            expect_tokens(rec, 2);
            if (saw_name) throw parse_error(rec.line, "duplicate 'name' record");
            name = rec.tokens[1];
            saw_name = true;
        } else if (kind == "charges") {
            if (rec.tokens.size() < 2)
                throw parse_error(rec.line, "'charges' needs at least one label");
            if (saw_charges) throw parse_error(rec.line, "duplicate 'charges' record");
            charges.assign(rec.tokens.begin() + 1, rec.tokens.end());
            saw_charges = true;
        } else if (kind == "vacuum") {
            expect_tokens(rec, 2);
            if (saw_vacuum) throw parse_error(rec.line, "duplicate 'vacuum' record");
            vacuum = rec.tokens[1];
            saw_vacuum = true;
        } else if (kind == "dual") {
            expect_tokens(rec, 3);
            duals.emplace_back(rec.tokens[1], rec.tokens[2]);
        } else if (kind == "fusion") {
            expect_tokens(rec, 5);
            const long n = parse_int(rec, rec.tokens[4]);
            if (n < 0 || n > static_cast<long>(kMaxFusionMultiplicity))
                throw parse_error(rec.line, "fusion multiplicity out of range [0, " +
                                                std::to_string(kMaxFusionMultiplicity) + "]");
            if (!fusion.emplace(std::array<std::string, 3>{rec.tokens[1], rec.tokens[2],
                                                           rec.tokens[3]},
                                static_cast<unsigned>(n))
                     .second)
                throw parse_error(rec.line, "duplicate 'fusion' record for (" + rec.tokens[1] +
                                                "," + rec.tokens[2] + ";" + rec.tokens[3] + ")");
        } else if (kind == "dim") {
            expect_tokens(rec, 3);
            if (!given_dims.emplace(rec.tokens[1], parse_number(rec, rec.tokens[2])).second)
                throw parse_error(rec.line, "duplicate 'dim' record for '" + rec.tokens[1] + "'");
        } else if (kind == "fsymbol") {
            expect_tokens(rec, 13);
            FEntry e;
            e.line = rec.line;
            e.block = {rec.tokens[1], rec.tokens[2], rec.tokens[3], rec.tokens[4]};
            e.inter = {rec.tokens[5], rec.tokens[8]};
            e.verts = {static_cast<int>(parse_int(rec, rec.tokens[6])),
                       static_cast<int>(parse_int(rec, rec.tokens[7])),
                       static_cast<int>(parse_int(rec, rec.tokens[9])),
                       static_cast<int>(parse_int(rec, rec.tokens[10]))};
            e.value = {parse_number(rec, rec.tokens[11]), parse_number(rec, rec.tokens[12])};
            fentries.push_back(std::move(e));
        } else if (kind == "twist") {
            expect_tokens(rec, 4);
            const Complex v{parse_number(rec, rec.tokens[2]), parse_number(rec, rec.tokens[3])};
            if (!given_twists.emplace(rec.tokens[1], v).second)
                throw parse_error(rec.line,
                                  "duplicate 'twist' record for '" + rec.tokens[1] + "'");
        } else if (kind == "smatrix") {
            if (rec.tokens.size() < 4 || rec.tokens.size() % 2 != 0)
                throw parse_error(rec.line, "'smatrix' needs a row label and re/im pairs");
            std::vector<Complex> row;
            for (std::size_t t = 2; t + 1 < rec.tokens.size(); t += 2)
                row.emplace_back(parse_number(rec, rec.tokens[t]),
                                 parse_number(rec, rec.tokens[t + 1]));
            if (!given_s_rows.emplace(rec.tokens[1], std::move(row)).second)
                throw parse_error(rec.line,
                                  "duplicate 'smatrix' record for '" + rec.tokens[1] + "'");
        } else {
            throw parse_error(rec.line, "unknown record '" + kind + "'");
        }
    }
    if (!saw_name) throw parse_error(0, "missing 'name' record");
    if (!saw_charges) throw parse_error(0, "missing 'charges' record");
    if (!saw_vacuum) throw parse_error(0, "missing 'vacuum' record");

    FusionRules rules = FusionRules::validated(charges, vacuum, duals, fusion);
    const int nc = rules.charge_count();

    QuantumDimensions dims = quantum_dimensions(rules);
    for (const auto& [label, value] : given_dims) {
        const int c = rules.index_of(label);
        if (std::abs(dims[c] - value) > 1e-8)
            throw validation_error("declared quantum dimension of '" + label + "' (" +
                                   format_double(value) + ") disagrees with the value computed "
                                   "from the fusion rules (" + format_double(dims[c]) + ")");
    }

    FSymbolTable table(rules);
    for (const auto& e : fentries) {
        try {
            table.set(rules.index_of(e.block[0]), rules.index_of(e.block[1]),
                      rules.index_of(e.block[2]), rules.index_of(e.block[3]),
                      rules.index_of(e.inter[0]), e.verts[0], e.verts[1],
                      rules.index_of(e.inter[1]), e.verts[2], e.verts[3], e.value);
        } catch (const std::invalid_argument& err) {
            throw parse_error(e.line, err.what());
        }
    }

    std::optional<std::vector<Complex>> twists;
    if (!given_twists.empty()) {
        if (static_cast<int>(given_twists.size()) != nc)
            throw validation_error("twist records must cover every charge exactly once");
        std::vector<Complex> t(static_cast<std::size_t>(nc));
        for (const auto& [label, value] : given_twists)
            t[static_cast<std::size_t>(rules.index_of(label))] = value;
        twists = std::move(t);
    }

    std::optional<Eigen::MatrixXcd> s_matrix;
    if (!given_s_rows.empty()) {
        if (static_cast<int>(given_s_rows.size()) != nc)
            throw validation_error("smatrix records must cover every charge exactly once");
        Eigen::MatrixXcd S(nc, nc);
        for (const auto& [label, row] : given_s_rows) {
            if (static_cast<int>(row.size()) != nc)
                throw validation_error("smatrix row for '" + label + "' has " +
                                       std::to_string(row.size()) + " entries, expected " +
                                       std::to_string(nc));
            const int a = rules.index_of(label);
            for (int b = 0; b < nc; ++b) S(a, b) = row[static_cast<std::size_t>(b)];
        }
        s_matrix = std::move(S);
    }

    AnyonModel model{std::move(name), std::move(rules),     std::move(dims), std::move(table),
                     std::move(twists), std::move(s_matrix), {}};
    if (run_validation) model.validate();
    return model;
}

AnyonModel load_model_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw parse_error(0, "cannot open model file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_model(ss.str());
}

void write_model_file(const AnyonModel& model, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write model file '" + path + "'");
    out << serialize_model(model);
}

}  // namespace anyon
