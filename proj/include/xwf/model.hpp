#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace xwf {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Document failed to load (missing file, bad syntax, unknown reference).
struct LoadError : Error {
    using Error::Error;
};

/// Referential integrity violation; the message lists the offending fact ids.
struct IntegrityError : Error {
    using Error::Error;
};

enum class ValueType { Numeric, Text };

std::string_view to_string(ValueType t);
ValueType value_type_from_string(std::string_view s);

/// A typed attribute or measure value. Numeric values compare as decimals,
/// text values lexicographically; the attribute's declared type decides which.
struct Value {
    ValueType type = ValueType::Text;
    double num = 0.0;
    std::string text;

    static Value number(double v) { return Value{ValueType::Numeric, v, {}}; }
    static Value str(std::string s) { return Value{ValueType::Text, 0.0, std::move(s)}; }
    /// Parses `raw` according to `t`; throws Error on a malformed numeric.
    static Value parse(ValueType t, std::string_view raw);

    /// Canonical rendering: numerics via shortest round-trip form, so
    /// "15" and "15.0" both canonicalize to "15".
    std::string to_string() const;

    /// Three-way comparison within one type: <0, 0, >0.
    int compare(const Value& other) const;

    bool operator==(const Value& other) const { return compare(other) == 0; }
};

struct AttributeMeta {
    std::string id;
    std::string name;
    ValueType value_type = ValueType::Text;

    bool operator==(const AttributeMeta&) const = default;
};

struct LevelMeta {
    std::string id;
    std::vector<AttributeMeta> attributes;

    const AttributeMeta* find_attribute(std::string_view attr_id) const;
    bool operator==(const LevelMeta&) const = default;
};

struct DimensionMeta {
    std::string id;
    std::string path;
    std::vector<LevelMeta> levels;

    /// First attribute with this id across levels, or nullptr.
    const AttributeMeta* find_attribute(std::string_view attr_id) const;
    bool operator==(const DimensionMeta&) const = default;
};

struct MeasureMeta {
    std::string id;

    bool operator==(const MeasureMeta&) const = default;
};

struct WarehouseMeta {
    std::string fact_id;
    std::string fact_path;
    std::vector<MeasureMeta> measures;
    std::vector<DimensionMeta> dimensions;

    const DimensionMeta* find_dimension(std::string_view dim_id) const;
    /// Attribute lookup across all dimensions; fills `owner` with the owning
    /// dimension when found. Returns nullptr when absent or ambiguous.
    const AttributeMeta* find_unique_attribute(std::string_view attr_id, std::string* owner) const;
    bool operator==(const WarehouseMeta&) const = default;
};

struct DimensionInstance {
    std::string id;
    std::string level_id;
    std::map<std::string, Value> attribute_values;
    std::optional<std::string> roll_up;
    std::optional<std::string> drill_down;

    bool operator==(const DimensionInstance&) const = default;
};

struct Fact {
    std::string id;
    std::map<std::string, double> measures;
    std::map<std::string, std::string> dim_refs; // dimension id -> instance id

    bool operator==(const Fact&) const = default;
};

/// In-memory star-schema warehouse. Immutable after load/generate; reads are
/// safe from any number of threads.
struct Warehouse {
    WarehouseMeta meta;
    std::vector<Fact> facts;
    std::map<std::string, std::vector<DimensionInstance>> dimensions;

    // Lookup caches, rebuilt by finalize(); not part of value identity.
    std::map<std::string, std::unordered_map<std::string, int>> instance_index;

    const std::vector<DimensionInstance>& instances_of(std::string_view dim_id) const;
    /// Index of instance `id` within dimension `dim_id`, or -1.
    int instance_pos(const std::string& dim_id, const std::string& instance_id) const;

    /// Rebuilds indexes and checks referential integrity.
    void finalize();

    bool operator==(const Warehouse& other) const {
        return meta == other.meta && facts == other.facts && dimensions == other.dimensions;
    }
};

/**
 * Loads a warehouse from `root_dir/dw-model.xml` and the documents it
 * references. Throws LoadError on missing or malformed documents and
 * IntegrityError when a fact references an unknown dimension instance.
 */
Warehouse load_warehouse(const std::filesystem::path& root_dir);

/**
 * Writes dw-model.xml, the facts document and one document per dimension
 * under `root_dir`. Output is byte-deterministic for equal warehouses.
 */
void save_warehouse(const Warehouse& w, const std::filesystem::path& root_dir);

/**
 * Deterministic synthetic Sales warehouse at benchmark scale: dimensions
 * Customer (1,000 instances), Supplier (1,000), Date (500) and Part (1,000),
 * with `n_facts` facts referencing uniformly drawn instances. Equal
 * (n_facts, seed) pairs produce identical warehouses.
 */
Warehouse generate_warehouse(long long n_facts, std::uint64_t seed);

} // namespace xwf
