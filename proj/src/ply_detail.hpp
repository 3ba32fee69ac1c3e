#pragma once

// Minimal PLY container parser shared by the splat-scene and mesh loaders.
// Handles ascii and binary_little_endian files, scalar and list properties.
// Internal to src/; not part of the public headers.

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace gsw::plydetail {

enum class PType { I8, U8, I16, U16, I32, U32, F32, F64 };

size_t ptype_size(PType t);

struct Prop {
    std::string name;
    PType type = PType::F32;
    bool is_list = false;
    PType count_type = PType::U8;  // list only
};

struct Elem {
    std::string name;
    size_t count = 0;
    std::vector<Prop> props;
    // Location of this element's data: byte offset for binary files, token
    // index for ascii files. Filled in by Parser::open.
    size_t body_offset = 0;

    bool has_list() const;
    size_t scalar_row_bytes() const;  // binary, no-list elements only
    int prop_index(const std::string& name) const;  // -1 if absent
};

class Parser {
public:
    // Reads the whole file, parses the header and locates element data.
    // Throws gsw::Error with the path and offending line on malformed input.
    static Parser open(const std::string& path);

    const std::vector<Elem>& elements() const { return elems_; }
    const Elem& element(const std::string& name) const;  // throws if absent

    // Streams every row of a scalar-only element; `vals` holds one double
    // per property, in header order.
    void scan_scalars(const Elem& e,
                      const std::function<void(size_t row, const double* vals)>& fn) const;

    // Streams list rows (e.g. face indices). Scalar properties in the same
    // element are decoded but dropped. Exactly one list property required.
    void scan_lists(const Elem& e,
                    const std::function<void(size_t row, const std::vector<int64_t>& items)>& fn)
        const;

private:
    std::string path_;
    std::string data_;
    bool binary_ = true;
    std::vector<Elem> elems_;
    std::vector<std::pair<size_t, size_t>> tokens_;  // ascii body: (offset, length)

    double read_scalar_binary(const char* p, PType t) const;
    double token_as_double(size_t tok, const char* what) const;
    friend Parser parse_impl(const std::string& path);
};

}  // namespace gsw::plydetail
