#include "daga/ingestion.hpp"

#include <cctype>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "daga/errors.hpp"

namespace daga {

namespace {

/// Whitespace tokenizer that tracks line numbers for parse errors.
struct Scanner {
    const std::string& text;
    std::size_t pos = 0;
    long line = 1;

    bool next(std::string& token) {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) {
            if (text[pos] == '\n') ++line;
            ++pos;
        }
        if (pos >= text.size()) return false;
        const std::size_t start = pos;
        while (pos < text.size() && !std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
        token = text.substr(start, pos - start);
        return true;
    }

    std::string require(const std::string& what) {
        std::string token;
        if (!next(token)) throw ParseError("unexpected end of input, expected " + what, line);
        return token;
    }

    long long require_int(const std::string& what) {
        const std::string token = require(what);
        long long value = 0;
        const auto* begin = token.data();
        const auto* end = begin + token.size();
        const auto res = std::from_chars(begin, end, value);
        if (res.ec != std::errc() || res.ptr != end)
            throw ParseError("expected integer for " + what + ", got '" + token + "'", line);
        return value;
    }

    double require_number(const std::string& what) {
        const std::string token = require(what);
        char* endp = nullptr;
        const double value = std::strtod(token.c_str(), &endp);
        if (endp != token.c_str() + token.size())
            throw ParseError("expected number for " + what + ", got '" + token + "'", line);
        return value;
    }
};

} // namespace

CnfFormula parse_dimacs(const std::string& text) {
    CnfFormula cnf;
    long num_clauses = -1;
    std::istringstream in(text);
    std::string raw;
    long line_no = 0;
    bool saw_header = false;
    std::vector<int> pending;

    while (std::getline(in, raw)) {
        ++line_no;
        std::istringstream ls(raw);
        std::string first;
        if (!(ls >> first)) continue;
        if (first == "c" || first[0] == 'c') continue;
        if (first == "p") {
            if (saw_header) throw ParseError("duplicate problem line", line_no);
            std::string fmt;
            if (!(ls >> fmt) || fmt != "cnf")
                throw ParseError("problem line must be 'p cnf <vars> <clauses>'", line_no);
            if (!(ls >> cnf.num_vars >> num_clauses) || cnf.num_vars < 1 || num_clauses < 0)
                throw ParseError("problem line must be 'p cnf <vars> <clauses>'", line_no);
            saw_header = true;
            continue;
        }
        if (!saw_header) throw ParseError("clause before 'p cnf' header", line_no);

        std::istringstream cs(raw);
        int lit = 0;
        while (cs >> lit) {
            if (lit == 0) {
                if (pending.size() != 3)
                    throw ParseError("clause has " + std::to_string(pending.size()) +
                                         " literals, this suite requires 3-CNF",
                                     line_no);
                CnfClause clause{};
                for (int i = 0; i < 3; ++i) clause.lits[static_cast<std::size_t>(i)] = pending[static_cast<std::size_t>(i)];
                cnf.clauses.push_back(clause);
                pending.clear();
            } else {
                const int var = lit > 0 ? lit : -lit;
                if (var > cnf.num_vars)
                    throw ParseError("literal " + std::to_string(lit) + " exceeds variable count " +
                                         std::to_string(cnf.num_vars),
                                     line_no);
                pending.push_back(lit);
            }
        }
        if (!cs.eof() && cs.fail()) throw ParseError("malformed literal", line_no);
    }
    if (!saw_header) throw ParseError("missing 'p cnf' header", line_no);
    if (!pending.empty()) throw ParseError("unterminated clause at end of file", line_no);
    if (static_cast<long>(cnf.clauses.size()) != num_clauses)
        throw ParseError("header declares " + std::to_string(num_clauses) + " clauses, found " +
                             std::to_string(cnf.clauses.size()),
                         line_no);
    return cnf;
}

KnapsackInstance parse_knapsack(const std::string& text) {
    Scanner scan{text};
    KnapsackInstance inst;
    const long long items = scan.require_int("item count");
    const long long constraints = scan.require_int("constraint count");
    if (items < 1 || constraints < 1)
        throw ParseError("knapsack header needs items >= 1 and constraints >= 1", scan.line);

    const std::string opt_token = scan.require("optimum (value, 0 or ?)");
    if (opt_token != "?" && opt_token != "0") {
        char* endp = nullptr;
        const double value = std::strtod(opt_token.c_str(), &endp);
        if (endp != opt_token.c_str() + opt_token.size())
            throw ParseError("malformed optimum '" + opt_token + "'", scan.line);
        inst.optimum = value;
    }

    inst.profits.reserve(static_cast<std::size_t>(items));
    for (long long i = 0; i < items; ++i) {
        const double p = scan.require_number("profit " + std::to_string(i + 1) + " of " +
                                             std::to_string(items));
        if (p < 0) throw ParseError("profits must be non-negative", scan.line);
        inst.profits.push_back(p);
    }
    for (long long j = 0; j < constraints; ++j) {
        std::vector<double> row;
        row.reserve(static_cast<std::size_t>(items));
        for (long long i = 0; i < items; ++i) {
            const double w = scan.require_number("weight row " + std::to_string(j + 1) + ", item " +
                                                 std::to_string(i + 1));
            if (w < 0) throw ParseError("weights must be non-negative", scan.line);
            row.push_back(w);
        }
        inst.weights.push_back(std::move(row));
    }
    for (long long j = 0; j < constraints; ++j) {
        const double c = scan.require_number("capacity " + std::to_string(j + 1));
        if (c < 0) throw ParseError("capacities must be non-negative", scan.line);
        inst.capacities.push_back(c);
    }
    std::string trailing;
    if (scan.next(trailing))
        throw ParseError("unexpected trailing token '" + trailing + "'", scan.line);
    return inst;
}

std::string write_knapsack(const KnapsackInstance& inst) {
    std::string out;
    out += std::to_string(inst.items()) + " " + std::to_string(inst.constraints()) + " ";
    out += inst.optimum ? format_double(*inst.optimum) : std::string("?");
    out += "\n";
    for (std::size_t i = 0; i < inst.items(); ++i) {
        out += format_double(inst.profits[i]);
        out += (i + 1) % 16 == 0 || i + 1 == inst.items() ? '\n' : ' ';
    }
    for (const auto& row : inst.weights) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            out += format_double(row[i]);
            out += (i + 1) % 16 == 0 || i + 1 == row.size() ? '\n' : ' ';
        }
    }
    for (std::size_t j = 0; j < inst.capacities.size(); ++j) {
        out += format_double(inst.capacities[j]);
        out += j + 1 == inst.capacities.size() ? '\n' : ' ';
    }
    return out;
}

std::vector<PatternTarget> parse_patterns(const std::string& text) {
    std::vector<PatternTarget> out;
    std::istringstream in(text);
    std::string raw;
    long line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        std::istringstream ls(raw);
        std::string word;
        if (!(ls >> word)) continue;
        if (word == "#") continue;
        if (word != "pattern")
            throw ParseError("expected 'pattern <name>' header, got '" + word + "'", line_no);
        PatternTarget t;
        if (!(ls >> t.name)) throw ParseError("pattern header missing a name", line_no);
        t.pixels.reserve(81);
        for (int r = 0; r < 9; ++r) {
            if (!std::getline(in, raw))
                throw ParseError("pattern '" + t.name + "' truncated at row " + std::to_string(r + 1),
                                 line_no);
            ++line_no;
            std::string cells;
            for (char c : raw)
                if (!std::isspace(static_cast<unsigned char>(c))) cells += c;
            if (cells.size() != 9)
                throw ParseError("pattern row must have 9 cells, got " +
                                     std::to_string(cells.size()),
                                 line_no);
            for (char c : cells) {
                if (c != '0' && c != '1')
                    throw ParseError(std::string("pattern cell must be 0 or 1, got '") + c + "'",
                                     line_no);
                t.pixels.push_back(c == '1' ? 1 : 0);
            }
        }
        out.push_back(std::move(t));
    }
    return out;
}

std::string write_patterns(const std::vector<PatternTarget>& patterns) {
    std::string out;
    for (const auto& p : patterns) {
        out += "pattern " + p.name + "\n";
        for (int r = 0; r < 9; ++r) {
            for (int c = 0; c < 9; ++c)
                out += p.pixels[static_cast<std::size_t>(9 * r + c)] ? '1' : '0';
            out += '\n';
        }
    }
    return out;
}

namespace {

std::string csv_quote(const std::string& field) {
    if (field.find_first_of(",\"\n") == std::string::npos) return field;
    std::string quoted = "\"";
    for (char c : field) {
        quoted += c;
        if (c == '"') quoted += '"';
    }
    quoted += '"';
    return quoted;
}

std::vector<std::string> csv_split(const std::string& line, long line_no) {
    std::vector<std::string> fields;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cur += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cur += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (quoted) throw ParseError("unterminated quoted CSV field", line_no);
    fields.push_back(cur);
    return fields;
}

} // namespace

std::string write_csv(const std::vector<TrialRow>& rows) {
    std::string out = "problem,algorithm,seed,best,evals_to_success,success\n";
    for (const auto& r : rows) {
        out += csv_quote(r.problem) + "," + csv_quote(r.algorithm) + ",";
        out += std::to_string(r.seed) + ",";
        out += format_double(r.best) + ",";
        if (r.evals_to_success) out += std::to_string(*r.evals_to_success);
        out += ",";
        out += r.success ? "1" : "0";
        out += "\n";
    }
    return out;
}

std::vector<TrialRow> parse_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    long line_no = 0;
    if (!std::getline(in, line)) throw ParseError("empty CSV", 1);
    ++line_no;
    if (csv_split(line, line_no) !=
        std::vector<std::string>{"problem", "algorithm", "seed", "best", "evals_to_success",
                                 "success"})
        throw ParseError("unexpected CSV header", line_no);

    std::vector<TrialRow> rows;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const auto fields = csv_split(line, line_no);
        if (fields.size() != 6)
            throw ParseError("expected 6 CSV fields, got " + std::to_string(fields.size()),
                             line_no);
        TrialRow r;
        r.problem = fields[0];
        r.algorithm = fields[1];
        try {
            r.seed = std::stoull(fields[2]);
            r.best = std::stod(fields[3]);
            if (!fields[4].empty()) r.evals_to_success = std::stoll(fields[4]);
        } catch (const std::logic_error&) {
            throw ParseError("malformed numeric CSV field", line_no);
        }
        if (fields[5] != "0" && fields[5] != "1")
            throw ParseError("success field must be 0 or 1", line_no);
        r.success = fields[5] == "1";
        rows.push_back(std::move(r));
    }
    return rows;
}

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

std::string read_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw ParseError("cannot open file: " + path, 0);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw ParseError("cannot open file for writing: " + path, 0);
    f.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!f) throw ParseError("failed writing file: " + path, 0);
}

} // namespace daga
