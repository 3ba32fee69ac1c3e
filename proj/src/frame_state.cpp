#include "gsw/frame_state.hpp"

#include <bit>
#include <cstring>
#include <fstream>

#include "gsw/error.hpp"

static_assert(std::endian::native == std::endian::little,
              "frame-state container assumes a little-endian host");

namespace gsw {

namespace {

constexpr char kMagic[8] = {'G', 'S', 'W', 'S', 'T', 'A', 'T', 'E'};
constexpr uint32_t kVersion = 1;

struct Writer {
    std::ofstream out;
    const std::string& path;

    Writer(const std::string& p) : out(p, std::ios::binary), path(p) {
        if (!out) fail("write_frame_state: cannot open '", p, "'");
    }
    void bytes(const void* p, size_t n) {
        out.write(static_cast<const char*>(p), static_cast<std::streamsize>(n));
    }
    template <typename T>
    void pod(T v) {
        bytes(&v, sizeof v);
    }
    void vec3(const Eigen::Vector3d& v) {
        for (int a = 0; a < 3; ++a) pod(v[a]);
    }
    void splat(const GaussianSplat& s) {
        vec3(s.position);
        pod(s.rotation.w());
        pod(s.rotation.x());
        pod(s.rotation.y());
        pod(s.rotation.z());
        vec3(s.scale);
        pod(s.opacity);
        vec3(s.rgb);
    }
};

struct Reader {
    std::ifstream in;
    const std::string& path;

    Reader(const std::string& p) : in(p, std::ios::binary), path(p) {
        if (!in) fail("read_frame_state: cannot open '", p, "'");
    }
    void bytes(void* p, size_t n, const char* what) {
        in.read(static_cast<char*>(p), static_cast<std::streamsize>(n));
        if (static_cast<size_t>(in.gcount()) != n)
            fail("read_frame_state '", path, "': truncated while reading ", what);
    }
    template <typename T>
    T pod(const char* what) {
        T v;
        bytes(&v, sizeof v, what);
        return v;
    }
    Eigen::Vector3d vec3(const char* what) {
        Eigen::Vector3d v;
        for (int a = 0; a < 3; ++a) v[a] = pod<double>(what);
        return v;
    }
    GaussianSplat splat(const char* what) {
        GaussianSplat s;
        s.position = vec3(what);
        double w = pod<double>(what), x = pod<double>(what), y = pod<double>(what),
               z = pod<double>(what);
        s.rotation = Eigen::Quaterniond(w, x, y, z);
        s.scale = vec3(what);
        s.opacity = pod<double>(what);
        s.rgb = vec3(what);
        return s;
    }
};

}  // namespace

void write_frame_state(const FrameState& state, const std::string& path) {
    Writer w(path);
    w.bytes(kMagic, sizeof kMagic);
    w.pod(kVersion);
    w.pod(static_cast<int32_t>(state.frame));
    w.pod(state.active_particles);

    w.pod(static_cast<uint64_t>(state.dynamic_splats.size()));
    for (const GaussianSplat& s : state.dynamic_splats) w.splat(s);

    w.pod(static_cast<uint64_t>(state.accumulated.size()));
    for (const AccumulatedSplat& a : state.accumulated) {
        w.splat(a.splat);
        w.pod(static_cast<int32_t>(a.birth_frame));
        w.pod(a.source_event);
    }

    w.pod(static_cast<uint8_t>(state.wetness ? 1 : 0));
    if (state.wetness) {
        const WetnessGrid& g = *state.wetness;
        w.vec3(g.bounds.lo);
        w.vec3(g.bounds.hi);
        w.pod(static_cast<int32_t>(g.res));
        w.pod(g.sigma_cells);
        w.pod(static_cast<int32_t>(g.radius_cells));
        uint64_t n = g.values.size();
        w.pod(n);
        w.bytes(g.values.data(), n * sizeof(double));
    }
    w.out.flush();
    if (!w.out) fail("write_frame_state: write failed for '", path, "'");
}

FrameState read_frame_state(const std::string& path) {
    Reader r(path);
    char magic[8];
    r.bytes(magic, sizeof magic, "magic");
    if (std::memcmp(magic, kMagic, sizeof kMagic) != 0)
        fail("read_frame_state '", path, "': not a frame-state file");
    uint32_t version = r.pod<uint32_t>("version");
    if (version != kVersion)
        fail("read_frame_state '", path, "': unsupported version ", version, " (expected ",
             kVersion, ")");

    FrameState state;
    state.frame = r.pod<int32_t>("frame index");
    state.active_particles = r.pod<uint64_t>("active count");

    uint64_t n_dyn = r.pod<uint64_t>("dynamic count");
    state.dynamic_splats.reserve(n_dyn);
    for (uint64_t i = 0; i < n_dyn; ++i)
        state.dynamic_splats.push_back(r.splat("dynamic splat"));

    uint64_t n_acc = r.pod<uint64_t>("accumulated count");
    state.accumulated.reserve(n_acc);
    for (uint64_t i = 0; i < n_acc; ++i) {
        AccumulatedSplat a;
        a.splat = r.splat("accumulated splat");
        a.birth_frame = r.pod<int32_t>("accumulated birth frame");
        a.source_event = r.pod<uint64_t>("accumulated source event");
        state.accumulated.push_back(a);
    }

    if (r.pod<uint8_t>("wetness flag") != 0) {
        WetnessGrid g;
        g.bounds.lo = r.vec3("wetness bounds");
        g.bounds.hi = r.vec3("wetness bounds");
        g.res = r.pod<int32_t>("wetness resolution");
        g.sigma_cells = r.pod<double>("wetness sigma");
        g.radius_cells = r.pod<int32_t>("wetness radius");
        uint64_t n = r.pod<uint64_t>("wetness cell count");
        if (n != static_cast<uint64_t>(g.res) * g.res * g.res)
            fail("read_frame_state '", path, "': wetness cell count ", n, " does not match ",
                 g.res, "^3");
        g.values.resize(n);
        r.bytes(g.values.data(), n * sizeof(double), "wetness values");
        state.wetness = std::move(g);
    }
    return state;
}

}  // namespace gsw
