#include "avatar/dataset.hpp"

#include <set>
#include <utility>

#include "avatar/errors.hpp"

namespace avatar {

std::string_view attribute_kind_name(AttributeKind k) {
    switch (k) {
        case AttributeKind::Numeric: return "numeric";
        case AttributeKind::Nominal: return "nominal";
        case AttributeKind::String: return "string";
        case AttributeKind::Date: return "date";
    }
    return "numeric";
}

AttributeKind attribute_kind_from_name(std::string_view name) {
    if (name == "numeric" || name == "real" || name == "integer") return AttributeKind::Numeric;
    if (name == "nominal") return AttributeKind::Nominal;
    if (name == "string") return AttributeKind::String;
    if (name == "date") return AttributeKind::Date;
    throw SchemaError("unknown attribute kind: " + std::string(name));
}

Dataset::Dataset(std::string name, std::vector<Attribute> attributes, std::vector<Row> rows,
                 std::size_t class_index)
    : name_(std::move(name)),
      attributes_(std::move(attributes)),
      rows_(std::move(rows)),
      class_index_(class_index) {
    validate();
}

void Dataset::validate() const {
    if (attributes_.empty()) throw InvariantError("dataset has no attributes");
    if (class_index_ >= attributes_.size()) {
        throw InvariantError("class_index " + std::to_string(class_index_) +
                             " out of range for " + std::to_string(attributes_.size()) +
                             " attributes");
    }
    for (std::size_t r = 0; r < rows_.size(); ++r) {
        if (rows_[r].size() != attributes_.size()) {
            throw InvariantError("row " + std::to_string(r) + " has " +
                                 std::to_string(rows_[r].size()) + " cells, expected " +
                                 std::to_string(attributes_.size()));
        }
        for (std::size_t a = 0; a < attributes_.size(); ++a) {
            const Cell& cell = rows_[r][a];
            if (!cell.has_value()) continue;
            const Attribute& attr = attributes_[a];
            switch (attr.kind) {
                case AttributeKind::Numeric:
                    if (!std::holds_alternative<double>(*cell)) {
                        throw InvariantError("non-numeric cell in numeric attribute " + attr.name);
                    }
                    break;
                case AttributeKind::Nominal: {
                    if (!std::holds_alternative<int32_t>(*cell)) {
                        throw InvariantError("non-index cell in nominal attribute " + attr.name);
                    }
                    int32_t idx = std::get<int32_t>(*cell);
                    if (idx < 0 || static_cast<std::size_t>(idx) >= attr.categories.size()) {
                        throw InvariantError("nominal cell outside category list in attribute " +
                                             attr.name);
                    }
                    break;
                }
                case AttributeKind::String:
                case AttributeKind::Date:
                    if (!std::holds_alternative<std::string>(*cell)) {
                        throw InvariantError("non-text cell in attribute " + attr.name);
                    }
                    break;
            }
        }
    }
    // A nominal column may declare no categories only when fully missing.
    for (std::size_t a = 0; a < attributes_.size(); ++a) {
        const Attribute& attr = attributes_[a];
        if (attr.kind != AttributeKind::Nominal || !attr.categories.empty()) continue;
        for (const Row& row : rows_) {
            if (row[a].has_value()) {
                throw InvariantError("nominal attribute " + attr.name +
                                     " has values but no category list");
            }
        }
    }
}

namespace {

struct ColumnScan {
    bool any_present = false;
    bool any_missing = false;
    std::size_t distinct_present = 0;  // saturates at 3
};

ColumnScan scan_column(const Dataset& d, std::size_t a) {
    ColumnScan s;
    std::set<Value> seen;
    for (const Row& row : d.rows()) {
        const Cell& cell = row[a];
        if (!cell.has_value()) {
            s.any_missing = true;
            continue;
        }
        s.any_present = true;
        if (seen.size() < 3) seen.insert(*cell);
    }
    s.distinct_present = seen.size();
    return s;
}

}  // namespace

CharacteristicToken extract_token(const Dataset& d) {
    CharacteristicToken t;

    const Attribute& cls = d.class_attribute();
    ColumnScan cls_scan = scan_column(d, d.class_index());
    switch (cls.kind) {
        case AttributeKind::Numeric: t.set(Characteristic::NumericClass, 1); break;
        case AttributeKind::Date: t.set(Characteristic::DateClass, 1); break;
        case AttributeKind::Nominal: t.set(Characteristic::NominalClass, 1); break;
        case AttributeKind::String: t.set(Characteristic::StringClass, 1); break;
    }
    if (cls.kind == AttributeKind::Nominal || cls.kind == AttributeKind::String) {
        t.set(Characteristic::SymbolicClass, 1);
        if (cls_scan.distinct_present == 2 && cls.kind == AttributeKind::Nominal) {
            t.set(Characteristic::BinaryClass, 1);
        }
        if (cls_scan.distinct_present == 1) t.set(Characteristic::UnaryClass, 1);
    }
    if (cls_scan.any_missing) t.set(Characteristic::MissingClassValues, 1);

    for (std::size_t a = 0; a < d.n_attributes(); ++a) {
        if (d.is_class(a)) continue;
        const Attribute& attr = d.attributes()[a];
        ColumnScan s = scan_column(d, a);
        switch (attr.kind) {
            case AttributeKind::Numeric: t.set(Characteristic::NumericAttributes, 1); break;
            case AttributeKind::Date: t.set(Characteristic::DateAttributes, 1); break;
            case AttributeKind::Nominal:
                t.set(Characteristic::NominalAttributes, 1);
                if (attr.categories.size() == 2) t.set(Characteristic::BinaryAttributes, 1);
                if (!s.any_present) t.set(Characteristic::EmptyNominalAttributes, 1);
                break;
            case AttributeKind::String: break;  // no attribute-side flag for strings
        }
        if (s.any_missing) t.set(Characteristic::MissingValues, 1);
        if (s.distinct_present == 1) t.set(Characteristic::UnaryAttributes, 1);
    }
    return t;
}

bool cell_missing(const Cell& c) { return !c.has_value(); }

double cell_numeric(const Cell& c) { return std::get<double>(*c); }

int32_t cell_nominal(const Cell& c) { return std::get<int32_t>(*c); }

const std::string& cell_text(const Cell& c) { return std::get<std::string>(*c); }

}  // namespace avatar
