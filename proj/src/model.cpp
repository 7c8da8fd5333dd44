#include "xwf/model.hpp"

#include "xwf/xml.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <random>

namespace xwf {

std::string_view to_string(ValueType t) {
    return t == ValueType::Numeric ? "numeric" : "text";
}

ValueType value_type_from_string(std::string_view s) {
    if (s == "numeric") return ValueType::Numeric;
    if (s == "text") return ValueType::Text;
    throw Error("unknown value type '" + std::string(s) + "'");
}

Value Value::parse(ValueType t, std::string_view raw) {
    if (t == ValueType::Text) return str(std::string(raw));
    double v = 0.0;
    const char* first = raw.data();
    const char* last = raw.data() + raw.size();
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc{} || ptr != last) {
        throw Error("expected a numeric literal, got '" + std::string(raw) + "'");
    }
    return number(v);
}

std::string Value::to_string() const {
    if (type == ValueType::Text) return text;
    char buf[32];
    if (num == std::floor(num) && std::abs(num) < 1e15) {
        auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, static_cast<long long>(num));
        return std::string(buf, ptr);
    }
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, num);
    return std::string(buf, ptr);
}

int Value::compare(const Value& other) const {
    if (type == ValueType::Numeric && other.type == ValueType::Numeric) {
        if (num < other.num) return -1;
        if (num > other.num) return 1;
        return 0;
    }
    return text.compare(other.text) < 0 ? -1 : (text == other.text ? 0 : 1);
}

const AttributeMeta* LevelMeta::find_attribute(std::string_view attr_id) const {
    for (const auto& a : attributes) {
        if (a.id == attr_id) return &a;
    }
    return nullptr;
}

const AttributeMeta* DimensionMeta::find_attribute(std::string_view attr_id) const {
    for (const auto& level : levels) {
        if (const auto* a = level.find_attribute(attr_id)) return a;
    }
    return nullptr;
}

const DimensionMeta* WarehouseMeta::find_dimension(std::string_view dim_id) const {
    for (const auto& d : dimensions) {
        if (d.id == dim_id) return &d;
    }
    return nullptr;
}

const AttributeMeta* WarehouseMeta::find_unique_attribute(std::string_view attr_id,
                                                          std::string* owner) const {
    const AttributeMeta* found = nullptr;
    for (const auto& d : dimensions) {
        if (const auto* a = d.find_attribute(attr_id)) {
            if (found) return nullptr; // ambiguous
            found = a;
            if (owner) *owner = d.id;
        }
    }
    return found;
}

const std::vector<DimensionInstance>& Warehouse::instances_of(std::string_view dim_id) const {
    auto it = dimensions.find(std::string(dim_id));
    if (it == dimensions.end()) throw Error("unknown dimension '" + std::string(dim_id) + "'");
    return it->second;
}

int Warehouse::instance_pos(const std::string& dim_id, const std::string& instance_id) const {
    auto dit = instance_index.find(dim_id);
    if (dit == instance_index.end()) return -1;
    auto iit = dit->second.find(instance_id);
    return iit == dit->second.end() ? -1 : iit->second;
}

void Warehouse::finalize() {
    instance_index.clear();
    for (const auto& [dim_id, instances] : dimensions) {
        auto& index = instance_index[dim_id];
        index.reserve(instances.size());
        for (size_t i = 0; i < instances.size(); ++i) {
            if (!index.emplace(instances[i].id, static_cast<int>(i)).second) {
                throw IntegrityError("dimension '" + dim_id + "' has duplicate instance id '" +
                                     instances[i].id + "'");
            }
        }
    }
    std::vector<std::string> dangling;
    for (const auto& f : facts) {
        for (const auto& d : meta.dimensions) {
            auto ref = f.dim_refs.find(d.id);
            if (ref == f.dim_refs.end()) {
                dangling.push_back(f.id + " (no reference to " + d.id + ")");
            } else if (instance_pos(d.id, ref->second) < 0) {
                dangling.push_back(f.id + " (" + d.id + "/" + ref->second + ")");
            }
        }
    }
    if (!dangling.empty()) {
        std::string msg = "dangling dimension references in facts:";
        for (const auto& s : dangling) msg += " " + s;
        throw IntegrityError(msg);
    }
}

// ---------------------------------------------------------------------------
// Load

namespace {

WarehouseMeta parse_meta(const xml::Element& root, const std::string& origin) {
    if (root.name != "DW-model") {
        throw LoadError(origin + ": expected root <DW-model>, found <" + root.name + ">");
    }
    WarehouseMeta meta;
    for (const auto* dim : root.children_named("dimension")) {
        DimensionMeta d;
        d.id = dim->require_attribute("id", origin);
        d.path = dim->require_attribute("path", origin);
        for (const auto* level : dim->children_named("Level")) {
            LevelMeta l;
            l.id = level->require_attribute("id", origin);
            for (const auto* attr : level->children_named("attribute")) {
                AttributeMeta a;
                a.name = attr->require_attribute("name", origin);
                a.id = a.name;
                a.value_type = value_type_from_string(attr->require_attribute("type", origin));
                if (l.find_attribute(a.id)) {
                    throw LoadError(origin + ": duplicate attribute '" + a.id + "' in level '" +
                                    l.id + "'");
                }
                l.attributes.push_back(std::move(a));
            }
            if (l.attributes.empty()) {
                throw LoadError(origin + ": level '" + l.id + "' declares no attributes");
            }
            d.levels.push_back(std::move(l));
        }
        if (meta.find_dimension(d.id)) {
            throw LoadError(origin + ": duplicate dimension id '" + d.id + "'");
        }
        meta.dimensions.push_back(std::move(d));
    }
    const xml::Element* fact = root.first_child("FactDoc");
    if (!fact) throw LoadError(origin + ": missing <FactDoc> declaration");
    meta.fact_id = fact->require_attribute("id", origin);
    meta.fact_path = fact->require_attribute("path", origin);
    for (const auto* m : fact->children_named("measure")) {
        meta.measures.push_back(MeasureMeta{m->require_attribute("id", origin)});
    }
    for (const auto* dref : fact->children_named("dimension")) {
        const std::string& idref = dref->require_attribute("idref", origin);
        if (!meta.find_dimension(idref)) {
            throw LoadError(origin + ": FactDoc references unknown dimension '" + idref + "'");
        }
    }
    return meta;
}

std::vector<DimensionInstance> parse_dimension_doc(const xml::Element& root,
                                                   const DimensionMeta& meta,
                                                   const std::string& origin) {
    if (root.name != "dimension") {
        throw LoadError(origin + ": expected root <dimension>, found <" + root.name + ">");
    }
    if (root.require_attribute("dim-id", origin) != meta.id) {
        throw LoadError(origin + ": dim-id '" + *root.find_attribute("dim-id") +
                        "' does not match metadata id '" + meta.id + "'");
    }
    std::vector<DimensionInstance> out;
    for (const auto* level : root.children_named("Level")) {
        const std::string level_id = level->require_attribute("id", origin);
        const LevelMeta* lmeta = nullptr;
        for (const auto& l : meta.levels) {
            if (l.id == level_id) lmeta = &l;
        }
        if (!lmeta) {
            throw LoadError(origin + ": level '" + level_id + "' not declared in dw-model.xml");
        }
        for (const auto* inst : level->children_named("instance")) {
            DimensionInstance di;
            di.id = inst->require_attribute("id", origin);
            di.level_id = level_id;
            if (const auto* r = inst->find_attribute("Roll-Up")) di.roll_up = *r;
            if (const auto* d = inst->find_attribute("Drill-Down")) di.drill_down = *d;
            for (const auto* attr : inst->children_named("attribute")) {
                const std::string& attr_id = attr->require_attribute("id", origin);
                const AttributeMeta* ameta = lmeta->find_attribute(attr_id);
                if (!ameta) {
                    throw LoadError(origin + ": instance '" + di.id +
                                    "' sets undeclared attribute '" + attr_id + "'");
                }
                di.attribute_values[attr_id] =
                    Value::parse(ameta->value_type, attr->require_attribute("value", origin));
            }
            out.push_back(std::move(di));
        }
    }
    return out;
}

std::vector<Fact> parse_facts_doc(const xml::Element& root, const WarehouseMeta& meta,
                                  const std::string& origin) {
    if (root.name != "FactDoc") {
        throw LoadError(origin + ": expected root <FactDoc>, found <" + root.name + ">");
    }
    std::vector<Fact> out;
    for (const auto* fe : root.children_named("fact")) {
        Fact f;
        f.id = fe->require_attribute("id", origin);
        for (const auto* m : fe->children_named("measure")) {
            const std::string& mid = m->require_attribute("id", origin);
            f.measures[mid] =
                Value::parse(ValueType::Numeric, m->require_attribute("value", origin)).num;
        }
        for (const auto* d : fe->children_named("dimension")) {
            f.dim_refs[d->require_attribute("dim-id", origin)] =
                d->require_attribute("value-id", origin);
        }
        if (f.dim_refs.size() != meta.dimensions.size()) {
            throw LoadError(origin + ": fact '" + f.id + "' references " +
                            std::to_string(f.dim_refs.size()) + " dimensions, expected " +
                            std::to_string(meta.dimensions.size()));
        }
        out.push_back(std::move(f));
    }
    return out;
}

} // namespace

Warehouse load_warehouse(const std::filesystem::path& root_dir) {
    const auto model_path = root_dir / "dw-model.xml";
    if (!std::filesystem::exists(model_path)) {
        throw LoadError("missing document: " + model_path.string());
    }
    Warehouse w;
    w.meta = parse_meta(xml::parse_file(model_path), model_path.string());

    for (const auto& d : w.meta.dimensions) {
        const auto path = root_dir / d.path;
        if (!std::filesystem::exists(path)) {
            throw LoadError("missing document: " + path.string());
        }
        w.dimensions[d.id] = parse_dimension_doc(xml::parse_file(path), d, path.string());
    }

    const auto fact_path = root_dir / w.meta.fact_path;
    if (!std::filesystem::exists(fact_path)) {
        throw LoadError("missing document: " + fact_path.string());
    }
    w.facts = parse_facts_doc(xml::parse_file(fact_path), w.meta, fact_path.string());

    w.finalize();
    return w;
}

// ---------------------------------------------------------------------------
// Save

namespace {

xml::Element meta_to_xml(const WarehouseMeta& meta) {
    xml::Element root{"DW-model", {}, {}};
    for (const auto& d : meta.dimensions) {
        auto& de = root.add_child("dimension");
        de.set_attribute("id", d.id);
        de.set_attribute("path", d.path);
        for (const auto& l : d.levels) {
            auto& le = de.add_child("Level");
            le.set_attribute("id", l.id);
            for (const auto& a : l.attributes) {
                auto& ae = le.add_child("attribute");
                ae.set_attribute("name", a.name);
                ae.set_attribute("type", std::string(to_string(a.value_type)));
            }
        }
    }
    auto& fe = root.add_child("FactDoc");
    fe.set_attribute("id", meta.fact_id);
    fe.set_attribute("path", meta.fact_path);
    for (const auto& m : meta.measures) {
        auto& me = fe.add_child("measure");
        me.set_attribute("id", m.id);
        me.set_attribute("type", "numeric");
    }
    for (const auto& d : meta.dimensions) {
        auto& de = fe.add_child("dimension");
        de.set_attribute("idref", d.id);
    }
    return root;
}

xml::Element facts_to_xml(const Warehouse& w) {
    xml::Element root{"FactDoc", {}, {}};
    root.set_attribute("id", w.meta.fact_id);
    for (const auto& f : w.facts) {
        auto& fe = root.add_child("fact");
        fe.set_attribute("id", f.id);
        for (const auto& m : w.meta.measures) {
            auto it = f.measures.find(m.id);
            if (it == f.measures.end()) continue;
            auto& me = fe.add_child("measure");
            me.set_attribute("id", m.id);
            me.set_attribute("value", Value::number(it->second).to_string());
        }
        for (const auto& d : w.meta.dimensions) {
            auto it = f.dim_refs.find(d.id);
            if (it == f.dim_refs.end()) continue;
            auto& de = fe.add_child("dimension");
            de.set_attribute("dim-id", d.id);
            de.set_attribute("value-id", it->second);
        }
    }
    return root;
}

xml::Element dimension_to_xml(const DimensionMeta& meta,
                              const std::vector<DimensionInstance>& instances) {
    xml::Element root{"dimension", {}, {}};
    root.set_attribute("dim-id", meta.id);
    for (const auto& l : meta.levels) {
        auto& le = root.add_child("Level");
        le.set_attribute("id", l.id);
        for (const auto& inst : instances) {
            if (inst.level_id != l.id) continue;
            auto& ie = le.add_child("instance");
            ie.set_attribute("id", inst.id);
            if (inst.roll_up) ie.set_attribute("Roll-Up", *inst.roll_up);
            if (inst.drill_down) ie.set_attribute("Drill-Down", *inst.drill_down);
            // Attribute order follows the level declaration.
            for (const auto& a : l.attributes) {
                auto it = inst.attribute_values.find(a.id);
                if (it == inst.attribute_values.end()) continue;
                auto& ae = ie.add_child("attribute");
                ae.set_attribute("id", a.id);
                ae.set_attribute("value", it->second.to_string());
            }
        }
    }
    return root;
}

} // namespace

void save_warehouse(const Warehouse& w, const std::filesystem::path& root_dir) {
    std::filesystem::create_directories(root_dir);
    xml::write_file(meta_to_xml(w.meta), root_dir / "dw-model.xml");
    xml::write_file(facts_to_xml(w), root_dir / w.meta.fact_path);
    for (const auto& d : w.meta.dimensions) {
        auto it = w.dimensions.find(d.id);
        static const std::vector<DimensionInstance> none;
        const auto& instances = it == w.dimensions.end() ? none : it->second;
        xml::write_file(dimension_to_xml(d, instances), root_dir / d.path);
    }
}

// ---------------------------------------------------------------------------
// Generator

namespace {

// Draws via modulo on the raw engine output. mt19937_64's stream is pinned by
// the standard, so generated warehouses are portable across toolchains.
long long draw(std::mt19937_64& rng, long long n) {
    return static_cast<long long>(rng() % static_cast<std::uint64_t>(n));
}

const std::vector<std::string> kSegments = {"AUTOMOBILE", "BUILDING", "FURNITURE", "HOUSEHOLD",
                                            "MACHINERY"};
const std::vector<std::string> kPartTypes = {"PBA", "PBB", "PBC", "PBD", "STD", "ECO"};
const std::vector<std::string> kDayNames = {"Mon", "Tue", "Wed", "Thu", "Fri", "Sat", "Sun"};
const std::vector<std::string> kMonths = {"Jan", "Feb", "Mar", "Apr", "May", "Jun",
                                          "Jul", "Aug", "Sep", "Oct", "Nov", "Dec"};

AttributeMeta attr(std::string id, ValueType t) { return AttributeMeta{id, id, t}; }

} // namespace

Warehouse generate_warehouse(long long n_facts, std::uint64_t seed) {
    if (n_facts < 0) throw Error("n_facts must be non-negative");
    Warehouse w;
    w.meta.fact_id = "Sales";
    w.meta.fact_path = "facts_Sales.xml";
    w.meta.measures = {MeasureMeta{"Quantity"}, MeasureMeta{"Amount"}};

    auto dim = [&](std::string id, std::string level, std::vector<AttributeMeta> attrs) {
        DimensionMeta d;
        d.id = id;
        d.path = "dimension_" + id + ".xml";
        d.levels.push_back(LevelMeta{std::move(level), std::move(attrs)});
        w.meta.dimensions.push_back(std::move(d));
    };
    dim("Customer", "Customers",
        {attr("c_customer_key", ValueType::Numeric), attr("c_name", ValueType::Text),
         attr("c_nation_key", ValueType::Numeric), attr("c_region_key", ValueType::Numeric),
         attr("c_mkt_segment", ValueType::Text)});
    dim("Supplier", "Suppliers",
        {attr("s_supplier_key", ValueType::Numeric), attr("s_name", ValueType::Text),
         attr("s_nation_key", ValueType::Numeric), attr("s_region_key", ValueType::Numeric)});
    dim("Date", "Days",
        {attr("d_date_key", ValueType::Numeric), attr("d_date_name", ValueType::Text),
         attr("d_month", ValueType::Text), attr("d_year", ValueType::Numeric)});
    dim("Part", "Parts",
        {attr("p_part_key", ValueType::Numeric), attr("p_name", ValueType::Text),
         attr("p_type", ValueType::Text), attr("p_size", ValueType::Numeric)});

    std::mt19937_64 rng(seed);

    auto& customers = w.dimensions["Customer"];
    for (int i = 1; i <= 1000; ++i) {
        DimensionInstance di;
        di.id = "c" + std::to_string(i);
        di.level_id = "Customers";
        const long long nation = draw(rng, 25);
        di.attribute_values["c_customer_key"] = Value::number(i);
        di.attribute_values["c_name"] = Value::str("Customer#" + std::to_string(i));
        di.attribute_values["c_nation_key"] = Value::number(static_cast<double>(nation));
        di.attribute_values["c_region_key"] = Value::number(static_cast<double>(nation / 5));
        di.attribute_values["c_mkt_segment"] = Value::str(kSegments[draw(rng, 5)]);
        customers.push_back(std::move(di));
    }
    auto& suppliers = w.dimensions["Supplier"];
    for (int i = 1; i <= 1000; ++i) {
        DimensionInstance di;
        di.id = "s" + std::to_string(i);
        di.level_id = "Suppliers";
        const long long nation = draw(rng, 25);
        di.attribute_values["s_supplier_key"] = Value::number(i);
        di.attribute_values["s_name"] = Value::str("Supplier#" + std::to_string(i));
        di.attribute_values["s_nation_key"] = Value::number(static_cast<double>(nation));
        di.attribute_values["s_region_key"] = Value::number(static_cast<double>(nation / 5));
        suppliers.push_back(std::move(di));
    }
    auto& dates = w.dimensions["Date"];
    for (int i = 1; i <= 500; ++i) {
        DimensionInstance di;
        di.id = "d" + std::to_string(i);
        di.level_id = "Days";
        di.attribute_values["d_date_key"] = Value::number(i);
        di.attribute_values["d_date_name"] = Value::str(kDayNames[draw(rng, 7)]);
        di.attribute_values["d_month"] = Value::str(kMonths[draw(rng, 12)]);
        di.attribute_values["d_year"] = Value::number(static_cast<double>(1992 + draw(rng, 11)));
        dates.push_back(std::move(di));
    }
    auto& parts = w.dimensions["Part"];
    for (int i = 1; i <= 1000; ++i) {
        DimensionInstance di;
        di.id = "p" + std::to_string(i);
        di.level_id = "Parts";
        di.attribute_values["p_part_key"] = Value::number(i);
        di.attribute_values["p_name"] = Value::str("Part#" + std::to_string(i));
        di.attribute_values["p_type"] = Value::str(kPartTypes[draw(rng, 6)]);
        di.attribute_values["p_size"] = Value::number(static_cast<double>(1 + draw(rng, 50)));
        parts.push_back(std::move(di));
    }

    w.facts.reserve(static_cast<size_t>(n_facts));
    for (long long i = 1; i <= n_facts; ++i) {
        Fact f;
        f.id = "t" + std::to_string(i);
        f.measures["Quantity"] = static_cast<double>(1 + draw(rng, 50));
        f.measures["Amount"] = static_cast<double>(100 + draw(rng, 999900)) / 100.0;
        f.dim_refs["Customer"] = customers[draw(rng, 1000)].id;
        f.dim_refs["Supplier"] = suppliers[draw(rng, 1000)].id;
        f.dim_refs["Date"] = dates[draw(rng, 500)].id;
        f.dim_refs["Part"] = parts[draw(rng, 1000)].id;
        w.facts.push_back(std::move(f));
    }

    w.finalize();
    return w;
}

} // namespace xwf
