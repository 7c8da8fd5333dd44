#include "xwf/xml.hpp"

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>

#include <fstream>
#include <sstream>

namespace xwf::xml {

namespace pt = boost::property_tree;

const std::string* Element::find_attribute(std::string_view key) const {
    for (const auto& [k, v] : attributes) {
        if (k == key) return &v;
    }
    return nullptr;
}

const std::string& Element::require_attribute(std::string_view key, std::string_view context) const {
    if (const std::string* v = find_attribute(key)) return *v;
    throw XmlError(std::string(context) + ": element <" + name + "> lacks attribute '" +
                   std::string(key) + "'");
}

std::vector<const Element*> Element::children_named(std::string_view child_name) const {
    std::vector<const Element*> out;
    for (const Element& c : children) {
        if (c.name == child_name) out.push_back(&c);
    }
    return out;
}

const Element* Element::first_child(std::string_view child_name) const {
    for (const Element& c : children) {
        if (c.name == child_name) return &c;
    }
    return nullptr;
}

Element& Element::add_child(std::string child_name) {
    children.push_back(Element{std::move(child_name), {}, {}});
    return children.back();
}

void Element::set_attribute(std::string key, std::string value) {
    attributes.emplace_back(std::move(key), std::move(value));
}

namespace {

Element from_ptree(const std::string& name, const pt::ptree& node) {
    Element e;
    e.name = name;
    for (const auto& [key, child] : node) {
        if (key == "<xmlattr>") {
            for (const auto& [ak, av] : child) e.attributes.emplace_back(ak, av.data());
        } else if (key == "<xmlcomment>" || key == "<xmltext>") {
            continue;
        } else {
            e.children.push_back(from_ptree(key, child));
        }
    }
    return e;
}

Element root_of(const pt::ptree& doc, const std::string& origin) {
    for (const auto& [key, child] : doc) {
        if (key != "<xmlcomment>" && key != "<xmlattr>") return from_ptree(key, child);
    }
    throw XmlError(origin + ": document has no root element");
}

void escape_into(std::string& out, std::string_view raw) {
    for (char c : raw) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
}

void append_element(std::string& out, const Element& e, int depth) {
    out.append(static_cast<size_t>(depth) * 2, ' ');
    out += '<';
    out += e.name;
    for (const auto& [k, v] : e.attributes) {
        out += ' ';
        out += k;
        out += "=\"";
        escape_into(out, v);
        out += '"';
    }
    if (e.children.empty()) {
        out += "/>\n";
        return;
    }
    out += ">\n";
    for (const Element& c : e.children) append_element(out, c, depth + 1);
    out.append(static_cast<size_t>(depth) * 2, ' ');
    out += "</";
    out += e.name;
    out += ">\n";
}

} // namespace

Element parse_file(const std::filesystem::path& file) {
    pt::ptree doc;
    try {
        pt::read_xml(file.string(), doc, pt::xml_parser::trim_whitespace);
    } catch (const pt::xml_parser_error& err) {
        throw XmlError(err.filename() + ":" + std::to_string(err.line()) + ": " + err.message());
    } catch (const pt::ptree_error& err) {
        throw XmlError(file.string() + ": " + err.what());
    }
    return root_of(doc, file.string());
}

Element parse_string(const std::string& text, const std::string& origin) {
    pt::ptree doc;
    std::istringstream in(text);
    try {
        pt::read_xml(in, doc, pt::xml_parser::trim_whitespace);
    } catch (const pt::xml_parser_error& err) {
        throw XmlError(origin + ":" + std::to_string(err.line()) + ": " + err.message());
    }
    return root_of(doc, origin);
}

std::string to_string(const Element& root) {
    std::string out = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    append_element(out, root, 0);
    return out;
}

void write_file(const Element& root, const std::filesystem::path& file) {
    std::ofstream out(file, std::ios::binary);
    if (!out) throw XmlError("cannot open " + file.string() + " for writing");
    const std::string text = to_string(root);
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!out) throw XmlError("write failed: " + file.string());
}

} // namespace xwf::xml
