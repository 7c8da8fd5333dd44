#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace xwf::xml {

/// Parse or I/O failure. The message names the offending file and, for
/// syntax errors, the line.
struct XmlError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Element tree with attributes kept in document order. Text content is
/// dropped: every format in this project stores its data in attributes.
struct Element {
    std::string name;
    std::vector<std::pair<std::string, std::string>> attributes;
    std::vector<Element> children;

    const std::string* find_attribute(std::string_view key) const;
    /// Attribute value, or XmlError mentioning `context` when absent.
    const std::string& require_attribute(std::string_view key, std::string_view context) const;
    std::vector<const Element*> children_named(std::string_view child_name) const;
    const Element* first_child(std::string_view child_name) const;

    Element& add_child(std::string child_name);
    void set_attribute(std::string key, std::string value);

    bool operator==(const Element&) const = default;
};

Element parse_file(const std::filesystem::path& file);
Element parse_string(const std::string& text, const std::string& origin);

/// Two-space indent, attributes in stored order, self-closing leaves.
/// Equal trees serialize byte-for-byte identically.
std::string to_string(const Element& root);
void write_file(const Element& root, const std::filesystem::path& file);

} // namespace xwf::xml
