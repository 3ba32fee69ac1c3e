#include "ply_detail.hpp"

#include <cctype>
#include <cstring>
#include <fstream>
#include <sstream>

#include "gsw/error.hpp"

namespace gsw::plydetail {

size_t ptype_size(PType t) {
    switch (t) {
        case PType::I8:
        case PType::U8: return 1;
        case PType::I16:
        case PType::U16: return 2;
        case PType::I32:
        case PType::U32:
        case PType::F32: return 4;
        case PType::F64: return 8;
    }
    return 0;
}

namespace {

PType parse_ptype(const std::string& s, const std::string& path) {
    if (s == "char" || s == "int8") return PType::I8;
    if (s == "uchar" || s == "uint8") return PType::U8;
    if (s == "short" || s == "int16") return PType::I16;
    if (s == "ushort" || s == "uint16") return PType::U16;
    if (s == "int" || s == "int32") return PType::I32;
    if (s == "uint" || s == "uint32") return PType::U32;
    if (s == "float" || s == "float32") return PType::F32;
    if (s == "double" || s == "float64") return PType::F64;
    fail("ply '", path, "': unknown property type '", s, "'");
}

}  // namespace

bool Elem::has_list() const {
    for (const auto& p : props)
        if (p.is_list) return true;
    return false;
}

size_t Elem::scalar_row_bytes() const {
    size_t n = 0;
    for (const auto& p : props) n += ptype_size(p.type);
    return n;
}

int Elem::prop_index(const std::string& pname) const {
    for (size_t i = 0; i < props.size(); ++i)
        if (props[i].name == pname) return static_cast<int>(i);
    return -1;
}

double Parser::read_scalar_binary(const char* p, PType t) const {
    auto load = [&](auto v) {
        std::memcpy(&v, p, sizeof(v));
        return static_cast<double>(v);
    };
    switch (t) {
        case PType::I8: return load(int8_t{});
        case PType::U8: return load(uint8_t{});
        case PType::I16: return load(int16_t{});
        case PType::U16: return load(uint16_t{});
        case PType::I32: return load(int32_t{});
        case PType::U32: return load(uint32_t{});
        case PType::F32: return load(float{});
        case PType::F64: return load(double{});
    }
    return 0.0;
}

double Parser::token_as_double(size_t tok, const char* what) const {
    if (tok >= tokens_.size()) fail("ply '", path_, "': unexpected end of data reading ", what);
    auto [off, len] = tokens_[tok];
    char* end = nullptr;
    double v = std::strtod(data_.data() + off, &end);
    if (end == data_.data() + off)
        fail("ply '", path_, "': cannot parse '", data_.substr(off, len), "' as ", what);
    return v;
}

Parser Parser::open(const std::string& path) {
    Parser ps;
    ps.path_ = path;
    {
        std::ifstream in(path, std::ios::binary);
        if (!in) fail("cannot open ply file '", path, "'");
        std::ostringstream buf;
        buf << in.rdbuf();
        ps.data_ = buf.str();
    }

    // --- header ---
    size_t pos = 0;
    auto next_line = [&]() -> std::string {
        size_t eol = ps.data_.find('\n', pos);
        if (eol == std::string::npos) fail("ply '", path, "': truncated header");
        std::string line = ps.data_.substr(pos, eol - pos);
        if (!line.empty() && line.back() == '\r') line.pop_back();
        pos = eol + 1;
        return line;
    };

    if (next_line() != "ply") fail("'", path, "' is not a ply file (missing magic)");
    bool saw_format = false;
    for (;;) {
        std::string line = next_line();
        std::istringstream ls(line);
        std::string word;
        ls >> word;
        if (word == "comment" || word == "obj_info" || word.empty()) continue;
        if (word == "format") {
            std::string fmt;
            ls >> fmt;
            if (fmt == "ascii")
                ps.binary_ = false;
            else if (fmt == "binary_little_endian")
                ps.binary_ = true;
            else
                fail("ply '", path, "': unsupported format '", fmt, "'");
            saw_format = true;
        } else if (word == "element") {
            Elem e;
            ls >> e.name >> e.count;
            if (ls.fail()) fail("ply '", path, "': malformed element line '", line, "'");
            ps.elems_.push_back(std::move(e));
        } else if (word == "property") {
            if (ps.elems_.empty()) fail("ply '", path, "': property before any element");
            std::string t1;
            ls >> t1;
            Prop p;
            if (t1 == "list") {
                std::string ct, vt;
                ls >> ct >> vt >> p.name;
                p.is_list = true;
                p.count_type = parse_ptype(ct, path);
                p.type = parse_ptype(vt, path);
            } else {
                p.type = parse_ptype(t1, path);
                ls >> p.name;
            }
            if (p.name.empty()) fail("ply '", path, "': malformed property line '", line, "'");
            ps.elems_.back().props.push_back(std::move(p));
        } else if (word == "end_header") {
            break;
        } else {
            fail("ply '", path, "': unexpected header line '", line, "'");
        }
    }
    if (!saw_format) fail("ply '", path, "': missing format line");

    // --- locate element data ---
    if (ps.binary_) {
        size_t off = pos;
        for (auto& e : ps.elems_) {
            e.body_offset = off;
            if (!e.has_list()) {
                off += e.count * e.scalar_row_bytes();
            } else {
                for (size_t r = 0; r < e.count; ++r) {
                    for (const auto& p : e.props) {
                        if (!p.is_list) {
                            off += ptype_size(p.type);
                            continue;
                        }
                        if (off + ptype_size(p.count_type) > ps.data_.size())
                            fail("ply '", path, "': truncated list data in element '", e.name,
                                 "' row ", r);
                        double n = ps.read_scalar_binary(ps.data_.data() + off, p.count_type);
                        off += ptype_size(p.count_type);
                        off += static_cast<size_t>(n) * ptype_size(p.type);
                    }
                }
            }
            if (off > ps.data_.size())
                fail("ply '", path, "': truncated data for element '", e.name, "' (need ", off,
                     " bytes, have ", ps.data_.size(), ")");
        }
    } else {
        // Tokenize the body once; elements then consume tokens in order.
        for (size_t i = pos; i < ps.data_.size();) {
            while (i < ps.data_.size() && std::isspace(static_cast<unsigned char>(ps.data_[i])))
                ++i;
            size_t start = i;
            while (i < ps.data_.size() && !std::isspace(static_cast<unsigned char>(ps.data_[i])))
                ++i;
            if (i > start) ps.tokens_.emplace_back(start, i - start);
        }
        size_t tok = 0;
        for (auto& e : ps.elems_) {
            e.body_offset = tok;
            for (size_t r = 0; r < e.count; ++r) {
                for (const auto& p : e.props) {
                    if (!p.is_list) {
                        ++tok;
                    } else {
                        double n = ps.token_as_double(tok++, "list count");
                        tok += static_cast<size_t>(n);
                    }
                }
            }
            if (tok > ps.tokens_.size())
                fail("ply '", path, "': truncated data for element '", e.name, "'");
        }
    }
    return ps;
}

const Elem& Parser::element(const std::string& name) const {
    for (const auto& e : elems_)
        if (e.name == name) return e;
    fail("ply '", path_, "': missing required element '", name, "'");
}

void Parser::scan_scalars(const Elem& e,
                          const std::function<void(size_t, const double*)>& fn) const {
    if (e.has_list())
        fail("ply '", path_, "': element '", e.name, "' has list properties; expected scalars");
    std::vector<double> vals(e.props.size());
    if (binary_) {
        size_t row_bytes = e.scalar_row_bytes();
        const char* p = data_.data() + e.body_offset;
        for (size_t r = 0; r < e.count; ++r) {
            const char* q = p + r * row_bytes;
            for (size_t i = 0; i < e.props.size(); ++i) {
                vals[i] = read_scalar_binary(q, e.props[i].type);
                q += ptype_size(e.props[i].type);
            }
            fn(r, vals.data());
        }
    } else {
        size_t tok = e.body_offset;
        for (size_t r = 0; r < e.count; ++r) {
            for (size_t i = 0; i < e.props.size(); ++i)
                vals[i] = token_as_double(tok++, e.props[i].name.c_str());
            fn(r, vals.data());
        }
    }
}

void Parser::scan_lists(
    const Elem& e, const std::function<void(size_t, const std::vector<int64_t>&)>& fn) const {
    int list_at = -1;
    for (size_t i = 0; i < e.props.size(); ++i)
        if (e.props[i].is_list) {
            if (list_at >= 0)
                fail("ply '", path_, "': element '", e.name, "' has multiple list properties");
            list_at = static_cast<int>(i);
        }
    if (list_at < 0) fail("ply '", path_, "': element '", e.name, "' has no list property");

    std::vector<int64_t> items;
    if (binary_) {
        const char* p = data_.data() + e.body_offset;
        for (size_t r = 0; r < e.count; ++r) {
            items.clear();
            for (size_t i = 0; i < e.props.size(); ++i) {
                const Prop& pr = e.props[i];
                if (!pr.is_list) {
                    p += ptype_size(pr.type);
                    continue;
                }
                auto n = static_cast<size_t>(read_scalar_binary(p, pr.count_type));
                p += ptype_size(pr.count_type);
                for (size_t k = 0; k < n; ++k) {
                    items.push_back(static_cast<int64_t>(read_scalar_binary(p, pr.type)));
                    p += ptype_size(pr.type);
                }
            }
            fn(r, items);
        }
    } else {
        size_t tok = e.body_offset;
        for (size_t r = 0; r < e.count; ++r) {
            items.clear();
            for (size_t i = 0; i < e.props.size(); ++i) {
                const Prop& pr = e.props[i];
                if (!pr.is_list) {
                    ++tok;
                    continue;
                }
                auto n = static_cast<size_t>(token_as_double(tok++, "list count"));
                for (size_t k = 0; k < n; ++k)
                    items.push_back(static_cast<int64_t>(token_as_double(tok++, "list item")));
            }
            fn(r, items);
        }
    }
}

}  // namespace gsw::plydetail
