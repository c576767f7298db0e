#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "avatar/characteristics.hpp"

namespace avatar {

enum class AttributeKind { Numeric, Nominal, String, Date };

std::string_view attribute_kind_name(AttributeKind k);
AttributeKind attribute_kind_from_name(std::string_view name);

struct Attribute {
    std::string name;
    AttributeKind kind = AttributeKind::Numeric;
    // Declared category list; meaningful for Nominal only. May be empty only
    // when every cell of the column is missing.
    std::vector<std::string> categories;

    bool operator==(const Attribute& other) const = default;
};

// Cell payload: double for numeric, category index for nominal, raw text for
// string and date columns. Dates are ISO-8601 strings; no date arithmetic.
using Value = std::variant<double, int32_t, std::string>;
using Cell = std::optional<Value>;
using Row = std::vector<Cell>;

class Dataset {
public:
    Dataset() = default;
    Dataset(std::string name, std::vector<Attribute> attributes, std::vector<Row> rows,
            std::size_t class_index);

    const std::string& name() const { return name_; }
    const std::vector<Attribute>& attributes() const { return attributes_; }
    const std::vector<Row>& rows() const { return rows_; }
    std::size_t class_index() const { return class_index_; }

    std::size_t n_rows() const { return rows_.size(); }
    std::size_t n_attributes() const { return attributes_.size(); }
    std::size_t n_cells() const { return rows_.size() * attributes_.size(); }

    const Attribute& class_attribute() const { return attributes_[class_index_]; }
    bool is_class(std::size_t attr_index) const { return attr_index == class_index_; }

    // Throws InvariantError when row arity, class index, or a nominal cell
    // value is out of contract.
    void validate() const;

    bool operator==(const Dataset& other) const = default;

private:
    std::string name_;
    std::vector<Attribute> attributes_;
    std::vector<Row> rows_;
    std::size_t class_index_ = 0;
};

// Flags the dataset per the extraction rules:
//  - class kind sets exactly one of NUMERIC/DATE/NOMINAL/STRING_CLASS;
//  - BINARY_CLASS refines a nominal class with exactly 2 observed distinct
//    present values, UNARY_CLASS a symbolic class with exactly 1;
//  - SYMBOLIC_CLASS is the union of NOMINAL_CLASS and STRING_CLASS;
//  - attribute-side flags scan the non-class columns; BINARY_ATTRIBUTES keys
//    on a declared 2-category nominal, UNARY_ATTRIBUTES on exactly one
//    distinct present value of any kind, EMPTY_NOMINAL_ATTRIBUTES on a
//    nominal column with every cell missing;
//  - PREDICTIVE_MODEL is always 0 for a dataset.
CharacteristicToken extract_token(const Dataset& d);

enum class DatasetFormat { ArffSubset, CsvWithSchema };

// ARFF subset: @relation/@attribute/@data with '?' for missing. The class is
// the last declared attribute. CSV expects a JSON sidecar next to the file
// (data.csv -> data.schema.json) declaring attributes and class_index.
Dataset load_dataset(const std::string& path, DatasetFormat format);

void save_arff(const Dataset& d, const std::string& path);

// Cell helpers shared by components and tests.
bool cell_missing(const Cell& c);
double cell_numeric(const Cell& c);
int32_t cell_nominal(const Cell& c);
const std::string& cell_text(const Cell& c);

}  // namespace avatar
