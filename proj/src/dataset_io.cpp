#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "avatar/dataset.hpp"
#include "avatar/errors.hpp"

namespace avatar {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

// Splits a comma-separated data line honoring single-quoted fields. Reports
// the 1-based column offset of each field for error messages.
std::vector<std::pair<std::string, int>> split_fields(const std::string& line, int line_no) {
    std::vector<std::pair<std::string, int>> out;
    std::string cur;
    int field_col = 1;
    bool quoted = false;
    for (std::size_t i = 0; i <= line.size(); ++i) {
        if (i == line.size()) {
            out.emplace_back(trim(cur), field_col);
            break;
        }
        char ch = line[i];
        if (ch == '\'') {
            quoted = !quoted;
            continue;
        }
        if (ch == ',' && !quoted) {
            out.emplace_back(trim(cur), field_col);
            cur.clear();
            field_col = static_cast<int>(i) + 2;
            continue;
        }
        cur += ch;
    }
    if (quoted) throw ParseError("unterminated quote", line_no);
    return out;
}

double parse_numeric(const std::string& text, int line_no, int col) {
    try {
        std::size_t pos = 0;
        double v = std::stod(text, &pos);
        if (pos != text.size()) throw std::invalid_argument(text);
        return v;
    } catch (const std::exception&) {
        throw ParseError("expected numeric value, got '" + text + "'", line_no, col);
    }
}

Cell parse_cell(const std::string& text, const Attribute& attr, int line_no, int col) {
    if (text == "?") return std::nullopt;
    switch (attr.kind) {
        case AttributeKind::Numeric:
            return Value{parse_numeric(text, line_no, col)};
        case AttributeKind::Nominal: {
            auto it = std::find(attr.categories.begin(), attr.categories.end(), text);
            if (it == attr.categories.end()) {
                throw ParseError("value '" + text + "' not in category list of attribute '" +
                                     attr.name + "'",
                                 line_no, col);
            }
            return Value{static_cast<int32_t>(it - attr.categories.begin())};
        }
        case AttributeKind::String:
        case AttributeKind::Date:
            return Value{text};
    }
    return std::nullopt;
}

Dataset load_arff(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open file: " + path);

    std::string relation = "dataset";
    std::vector<Attribute> attributes;
    std::vector<Row> rows;
    bool in_data = false;
    std::string line;
    int line_no = 0;

    while (std::getline(in, line)) {
        ++line_no;
        std::string stripped = trim(line);
        if (stripped.empty() || stripped[0] == '%') continue;

        if (!in_data && stripped[0] == '@') {
            std::string low = lower(stripped);
            if (low.rfind("@relation", 0) == 0) {
                relation = trim(stripped.substr(9));
                if (!relation.empty() && relation.front() == '\'' && relation.back() == '\'') {
                    relation = relation.substr(1, relation.size() - 2);
                }
            } else if (low.rfind("@attribute", 0) == 0) {
                std::string rest = trim(stripped.substr(10));
                if (rest.empty()) throw ParseError("@attribute without a name", line_no);
                Attribute attr;
                if (rest[0] == '\'') {
                    std::size_t close = rest.find('\'', 1);
                    if (close == std::string::npos) throw ParseError("unterminated quote", line_no);
                    attr.name = rest.substr(1, close - 1);
                    rest = trim(rest.substr(close + 1));
                } else {
                    std::size_t sp = rest.find_first_of(" \t");
                    if (sp == std::string::npos) {
                        throw ParseError("@attribute missing a type", line_no);
                    }
                    attr.name = rest.substr(0, sp);
                    rest = trim(rest.substr(sp));
                }
                if (!rest.empty() && rest[0] == '{') {
                    std::size_t close = rest.find('}');
                    if (close == std::string::npos) {
                        throw ParseError("unterminated category list", line_no);
                    }
                    attr.kind = AttributeKind::Nominal;
                    for (auto& [field, col] : split_fields(rest.substr(1, close - 1), line_no)) {
                        (void)col;
                        if (!field.empty()) attr.categories.push_back(field);
                    }
                } else {
                    std::string type = lower(rest.substr(0, rest.find_first_of(" \t")));
                    attr.kind = attribute_kind_from_name(type);
                }
                attributes.push_back(std::move(attr));
            } else if (low.rfind("@data", 0) == 0) {
                if (attributes.empty()) throw ParseError("@data before any @attribute", line_no);
                in_data = true;
            } else {
                throw ParseError("unknown declaration: " + stripped, line_no);
            }
            continue;
        }

        if (!in_data) throw ParseError("data line before @data", line_no);

        auto fields = split_fields(stripped, line_no);
        if (fields.size() != attributes.size()) {
            throw SchemaError("line " + std::to_string(line_no) + ": expected " +
                              std::to_string(attributes.size()) + " fields, got " +
                              std::to_string(fields.size()));
        }
        Row row;
        row.reserve(fields.size());
        for (std::size_t a = 0; a < fields.size(); ++a) {
            row.push_back(parse_cell(fields[a].first, attributes[a], line_no, fields[a].second));
        }
        rows.push_back(std::move(row));
    }
    if (attributes.empty()) throw ParseError("no attributes declared in " + path);
    return Dataset(relation, std::move(attributes), std::move(rows), attributes.size() - 1);
}

std::string schema_path_for(const std::string& csv_path) {
    std::string base = csv_path;
    if (base.size() > 4 && base.substr(base.size() - 4) == ".csv") {
        base = base.substr(0, base.size() - 4);
    }
    return base + ".schema.json";
}

Dataset load_csv_with_schema(const std::string& path) {
    std::ifstream schema_in(schema_path_for(path));
    if (!schema_in) throw ParseError("cannot open schema sidecar: " + schema_path_for(path));
    nlohmann::json schema;
    try {
        schema = nlohmann::json::parse(schema_in);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError("schema sidecar is not valid JSON: " + std::string(e.what()));
    }

    if (!schema.contains("attributes") || !schema["attributes"].is_array()) {
        throw SchemaError("schema sidecar missing 'attributes' array");
    }
    std::vector<Attribute> attributes;
    for (const auto& a : schema["attributes"]) {
        Attribute attr;
        attr.name = a.at("name").get<std::string>();
        attr.kind = attribute_kind_from_name(a.at("kind").get<std::string>());
        if (a.contains("categories")) {
            attr.categories = a["categories"].get<std::vector<std::string>>();
        }
        attributes.push_back(std::move(attr));
    }
    std::size_t class_index = schema.value("class_index", attributes.size() - 1);
    if (class_index >= attributes.size()) {
        throw SchemaError("class_index " + std::to_string(class_index) + " out of range");
    }

    std::ifstream in(path);
    if (!in) throw ParseError("cannot open file: " + path);
    std::vector<Row> rows;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string stripped = trim(line);
        if (stripped.empty()) continue;
        auto fields = split_fields(stripped, line_no);
        if (fields.size() != attributes.size()) {
            throw SchemaError("line " + std::to_string(line_no) + ": expected " +
                              std::to_string(attributes.size()) + " fields, got " +
                              std::to_string(fields.size()));
        }
        Row row;
        for (std::size_t a = 0; a < fields.size(); ++a) {
            const std::string& text = fields[a].first;
            if (text.empty() || text == "?") {
                row.push_back(std::nullopt);
            } else {
                row.push_back(parse_cell(text, attributes[a], line_no, fields[a].second));
            }
        }
        rows.push_back(std::move(row));
    }
    std::string name = path;
    std::size_t slash = name.find_last_of('/');
    if (slash != std::string::npos) name = name.substr(slash + 1);
    return Dataset(name, std::move(attributes), std::move(rows), class_index);
}

bool needs_quoting(const std::string& s) {
    return s.empty() || s.find_first_of(" ,\t{}'") != std::string::npos;
}

std::string quoted(const std::string& s) {
    return needs_quoting(s) ? "'" + s + "'" : s;
}

}  // namespace

Dataset load_dataset(const std::string& path, DatasetFormat format) {
    switch (format) {
        case DatasetFormat::ArffSubset: return load_arff(path);
        case DatasetFormat::CsvWithSchema: return load_csv_with_schema(path);
    }
    throw Error("unreachable");
}

void save_arff(const Dataset& d, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write file: " + path);
    out << "@relation " << quoted(d.name()) << "\n\n";
    for (const Attribute& attr : d.attributes()) {
        out << "@attribute " << quoted(attr.name) << ' ';
        switch (attr.kind) {
            case AttributeKind::Numeric: out << "numeric"; break;
            case AttributeKind::String: out << "string"; break;
            case AttributeKind::Date: out << "date"; break;
            case AttributeKind::Nominal: {
                out << '{';
                for (std::size_t i = 0; i < attr.categories.size(); ++i) {
                    if (i) out << ',';
                    out << quoted(attr.categories[i]);
                }
                out << '}';
                break;
            }
        }
        out << '\n';
    }
    out << "\n@data\n";
    std::ostringstream line;
    for (const Row& row : d.rows()) {
        line.str("");
        for (std::size_t a = 0; a < row.size(); ++a) {
            if (a) line << ',';
            const Cell& cell = row[a];
            if (!cell.has_value()) {
                line << '?';
                continue;
            }
            const Attribute& attr = d.attributes()[a];
            switch (attr.kind) {
                case AttributeKind::Numeric: {
                    char buf[32];
                    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf),
                                                   std::get<double>(*cell),
                                                   std::chars_format::general, 17);
                    (void)ec;
                    line << std::string_view(buf, ptr - buf);
                    break;
                }
                case AttributeKind::Nominal:
                    line << quoted(attr.categories[std::get<int32_t>(*cell)]);
                    break;
                case AttributeKind::String:
                case AttributeKind::Date:
                    line << quoted(std::get<std::string>(*cell));
                    break;
            }
        }
        out << line.str() << '\n';
    }
}

}  // namespace avatar
