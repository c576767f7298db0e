#include <algorithm>
#include <filesystem>
#include <fstream>
#include <random>

#include <nlohmann/json.hpp>

#include "avatar/errors.hpp"
#include "avatar/synthetic.hpp"

namespace avatar {

namespace {

// Cell layouts below keep every flag observable in any row subsequence the
// pool's samplers can select: index strides 2 and 4 from row 0, and the
// leading rows of each class group.

std::vector<double> uniform_column(std::size_t rows, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> dist(0.0, 1.0);
    std::vector<double> out(rows);
    for (double& v : out) v = dist(rng);
    return out;
}

Attribute carrier_attribute() { return {"x_carrier", AttributeKind::Numeric, {}}; }

Cell nominal3_cell(std::size_t i) { return Value{static_cast<int32_t>(i % 3)}; }

Cell binary_block_cell(std::size_t i) { return Value{static_cast<int32_t>((i / 4) % 2)}; }

const char* kDates[5] = {"2020-01-06", "2020-01-07", "2020-01-08", "2020-01-09", "2020-01-10"};

struct CaseSpec {
    Characteristic characteristic;
    bool attribute_side;
};

Dataset build_case(Characteristic target, bool attribute_side, bool nominal_class,
                   std::size_t rows, std::mt19937_64& rng) {
    std::vector<Attribute> attrs;
    attrs.push_back(carrier_attribute());
    std::vector<double> carrier = uniform_column(rows, rng);

    // Optional focus attribute for attribute-side characteristics.
    std::vector<double> numeric_focus;
    if (attribute_side) {
        switch (target) {
            case Characteristic::BinaryAttributes:
                attrs.push_back({"bin", AttributeKind::Nominal, {"p", "q"}});
                break;
            case Characteristic::DateAttributes:
                attrs.push_back({"when", AttributeKind::Date, {}});
                break;
            case Characteristic::EmptyNominalAttributes:
                attrs.push_back({"empty", AttributeKind::Nominal, {"a", "b", "c"}});
                break;
            case Characteristic::MissingValues:
                attrs.push_back({"gaps", AttributeKind::Numeric, {}});
                numeric_focus = uniform_column(rows, rng);
                break;
            case Characteristic::NominalAttributes:
                attrs.push_back({"color", AttributeKind::Nominal, {"a", "b", "c"}});
                break;
            case Characteristic::NumericAttributes:
                attrs.push_back({"value", AttributeKind::Numeric, {}});
                numeric_focus = uniform_column(rows, rng);
                break;
            case Characteristic::UnaryAttributes:
                attrs.push_back({"flat", AttributeKind::Numeric, {}});
                break;
            default:
                throw InvariantError("not an attribute-side characteristic");
        }
    }

    Attribute cls;
    if (attribute_side) {
        cls = nominal_class ? Attribute{"class", AttributeKind::Nominal, {"c_a", "c_b", "c_c"}}
                            : Attribute{"class", AttributeKind::Numeric, {}};
    } else {
        switch (target) {
            case Characteristic::BinaryClass:
                cls = {"class", AttributeKind::Nominal, {"yes", "no"}};
                break;
            case Characteristic::NumericClass:
                cls = {"class", AttributeKind::Numeric, {}};
                break;
            case Characteristic::DateClass:
                cls = {"class", AttributeKind::Date, {}};
                break;
            case Characteristic::MissingClassValues:
            case Characteristic::NominalClass:
                cls = {"class", AttributeKind::Nominal, {"c_a", "c_b", "c_c"}};
                break;
            case Characteristic::StringClass:
                cls = {"class", AttributeKind::String, {}};
                break;
            case Characteristic::UnaryClass:
                cls = {"class", AttributeKind::Nominal, {"only"}};
                break;
            default:
                throw InvariantError("not a class-side characteristic");
        }
    }
    attrs.push_back(cls);

    std::vector<double> numeric_class_values = uniform_column(rows, rng);
    std::vector<Row> data;
    data.reserve(rows);
    for (std::size_t i = 0; i < rows; ++i) {
        Row row;
        row.push_back(Value{carrier[i]});
        if (attribute_side) {
            switch (target) {
                case Characteristic::BinaryAttributes: row.push_back(binary_block_cell(i)); break;
                case Characteristic::DateAttributes:
                    row.push_back(Value{std::string(kDates[i % 5])});
                    break;
                case Characteristic::EmptyNominalAttributes: row.push_back(std::nullopt); break;
                case Characteristic::MissingValues:
                    row.push_back(i % 8 == 0 ? Cell{std::nullopt} : Cell{Value{numeric_focus[i]}});
                    break;
                case Characteristic::NominalAttributes: row.push_back(nominal3_cell(i)); break;
                case Characteristic::NumericAttributes:
                    row.push_back(Value{numeric_focus[i]});
                    break;
                case Characteristic::UnaryAttributes: row.push_back(Value{0.5}); break;
                default: break;
            }
        }
        // class cell
        if (attribute_side) {
            row.push_back(nominal_class ? nominal3_cell(i) : Cell{Value{numeric_class_values[i]}});
        } else {
            switch (target) {
                case Characteristic::BinaryClass: row.push_back(binary_block_cell(i)); break;
                case Characteristic::NumericClass:
                    row.push_back(Value{numeric_class_values[i]});
                    break;
                case Characteristic::DateClass:
                    row.push_back(Value{std::string(kDates[i % 5])});
                    break;
                case Characteristic::MissingClassValues:
                    row.push_back(i == 0 || i == 2 ? Cell{std::nullopt} : nominal3_cell(i));
                    break;
                case Characteristic::NominalClass: row.push_back(nominal3_cell(i)); break;
                case Characteristic::StringClass:
                    row.push_back(Value{"s" + std::to_string(i % 5)});
                    break;
                case Characteristic::UnaryClass: row.push_back(Value{static_cast<int32_t>(0)}); break;
                default: break;
            }
        }
        data.push_back(std::move(row));
    }
    return Dataset("synthetic", std::move(attrs), std::move(data), attrs.size() - 1);
}

std::string lowered(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

}  // namespace

std::vector<SyntheticCase> generate_suite(std::size_t rows, uint64_t seed) {
    if (rows < 8) throw InvariantError("synthetic suite needs rows >= 8");
    const CaseSpec attribute_cases[] = {
        {Characteristic::BinaryAttributes, true},
        {Characteristic::DateAttributes, true},
        {Characteristic::EmptyNominalAttributes, true},
        {Characteristic::MissingValues, true},
        {Characteristic::NominalAttributes, true},
        {Characteristic::NumericAttributes, true},
        {Characteristic::UnaryAttributes, true},
    };
    const CaseSpec class_cases[] = {
        {Characteristic::BinaryClass, false},
        {Characteristic::NumericClass, false},
        {Characteristic::DateClass, false},
        {Characteristic::MissingClassValues, false},
        {Characteristic::NominalClass, false},
        {Characteristic::StringClass, false},
        {Characteristic::UnaryClass, false},
    };

    std::vector<SyntheticCase> suite;
    for (const CaseSpec& spec : attribute_cases) {
        for (bool nominal_class : {true, false}) {
            std::mt19937_64 rng(seed ^ (static_cast<uint64_t>(spec.characteristic) * 2 +
                                        (nominal_class ? 1 : 0) + 0x517cc1b727220a95ull));
            SyntheticCase c{spec.characteristic, nominal_class ? "nominal" : "numeric", "",
                            build_case(spec.characteristic, true, nominal_class, rows, rng)};
            c.name = lowered(characteristic_name(c.characteristic)) + "__" + c.class_variant;
            suite.push_back(std::move(c));
        }
    }
    for (const CaseSpec& spec : class_cases) {
        std::mt19937_64 rng(seed ^ (static_cast<uint64_t>(spec.characteristic) * 2 +
                                    0x2545f4914f6cdd1dull));
        bool nominal_variant = spec.characteristic != Characteristic::NumericClass;
        SyntheticCase c{spec.characteristic, nominal_variant ? "nominal" : "numeric", "",
                        build_case(spec.characteristic, false, nominal_variant, rows, rng)};
        c.name = lowered(characteristic_name(c.characteristic)) + "__" + c.class_variant;
        suite.push_back(std::move(c));
    }
    std::sort(suite.begin(), suite.end(), [](const SyntheticCase& a, const SyntheticCase& b) {
        std::string_view an = characteristic_name(a.characteristic);
        std::string_view bn = characteristic_name(b.characteristic);
        return an != bn ? an < bn : a.class_variant < b.class_variant;
    });
    return suite;
}

void write_suite(const std::vector<SyntheticCase>& suite, const std::string& dir, std::size_t rows,
                 uint64_t seed) {
    std::filesystem::create_directories(dir);
    nlohmann::ordered_json manifest;
    manifest["schema_version"] = 1;
    manifest["rows"] = rows;
    manifest["seed"] = seed;
    manifest["cases"] = nlohmann::ordered_json::array();
    for (const SyntheticCase& c : suite) {
        std::string file = c.name + ".arff";
        save_arff(c.dataset, dir + "/" + file);
        nlohmann::ordered_json entry;
        entry["name"] = c.name;
        entry["characteristic"] = std::string(characteristic_name(c.characteristic));
        entry["class_variant"] = c.class_variant;
        entry["file"] = file;
        nlohmann::ordered_json token = nlohmann::ordered_json::object();
        CharacteristicToken t = extract_token(c.dataset);
        for (Characteristic ch : all_characteristics()) {
            token[std::string(characteristic_name(ch))] = static_cast<int>(t.get(ch));
        }
        entry["expected_token"] = token;
        manifest["cases"].push_back(entry);
    }
    std::ofstream out(dir + "/manifest.json");
    if (!out) throw Error("cannot write manifest in " + dir);
    out << manifest.dump(2) << "\n";
}

std::vector<SyntheticCase> load_suite(const std::string& dir) {
    std::ifstream in(dir + "/manifest.json");
    if (!in) throw ParseError("cannot open " + dir + "/manifest.json");
    nlohmann::json manifest;
    try {
        manifest = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError("manifest.json: " + std::string(e.what()));
    }
    std::vector<SyntheticCase> suite;
    for (const auto& entry : manifest.at("cases")) {
        SyntheticCase c{
            characteristic_from_name(entry.at("characteristic").get<std::string>()),
            entry.at("class_variant").get<std::string>(),
            entry.at("name").get<std::string>(),
            load_dataset(dir + "/" + entry.at("file").get<std::string>(),
                         DatasetFormat::ArffSubset)};
        suite.push_back(std::move(c));
    }
    return suite;
}

uint64_t suite_hash(const std::vector<SyntheticCase>& suite) {
    uint64_t h = 0xcbf29ce484222325ull;
    auto mix = [&h](const std::string& s) {
        for (unsigned char ch : s) {
            h ^= ch;
            h *= 0x100000001b3ull;
        }
    };
    for (const SyntheticCase& c : suite) {
        mix(c.name);
        mix(c.dataset.name());
        for (const Attribute& a : c.dataset.attributes()) {
            mix(a.name);
            mix(std::string(attribute_kind_name(a.kind)));
            for (const std::string& cat : a.categories) mix(cat);
        }
        for (const Row& row : c.dataset.rows()) {
            for (const Cell& cell : row) {
                if (!cell.has_value()) {
                    mix("?");
                } else if (std::holds_alternative<double>(*cell)) {
                    mix(std::to_string(std::get<double>(*cell)));
                } else if (std::holds_alternative<int32_t>(*cell)) {
                    mix(std::to_string(std::get<int32_t>(*cell)));
                } else {
                    mix(std::get<std::string>(*cell));
                }
            }
        }
    }
    return h;
}

}  // namespace avatar
