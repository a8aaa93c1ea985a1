#include "bfbelp/logio.hpp"

#include <fstream>
#include <istream>
#include <map>
#include <ostream>

#include "bfbelp/csv.hpp"

namespace bfbelp {

const char* const kLogHeader =
    "tick,time,kind,id,x,y,z,vx,vy,vz,cmd_x,cmd_y,cmd_z,target_x,target_y,target_z,component,status,origin_tick,"
    "lead_tick,intercept_x,intercept_y,intercept_z,contributors,rejected,eta,rho0,hard_radius";

namespace {

constexpr std::size_t kColumns = 28;

enum Col : std::size_t {
  kTick, kTime, kKind, kId, kX, kY, kZ, kVx, kVy, kVz, kCx, kCy, kCz, kTx, kTy, kTz, kComponent, kStatus,
  kOrigin, kLead, kIx, kIy, kIz, kContrib, kRejected, kEta, kRho0, kHard
};

using Row = std::vector<std::string>;

void put_vec(Row& r, std::size_t first, const Vec3& v) {
  r[first] = csv::fmt(v.x);
  r[first + 1] = csv::fmt(v.y);
  r[first + 2] = csv::fmt(v.z);
}

void emit(std::ostream& os, const Row& r) {
  for (std::size_t i = 0; i < r.size(); ++i) {
    if (i) os << ',';
    os << r[i];
  }
  os << '\n';
}

Row tick_row(const TickRecord& t, const char* kind) {
  Row r(kColumns);
  r[kTick] = csv::fmt(static_cast<std::int64_t>(t.tick));
  r[kTime] = csv::fmt(t.time);
  r[kKind] = kind;
  return r;
}

}  // namespace

void write_log_csv(std::ostream& os, const SimLog& log) {
  os << kLogHeader << '\n';
  for (std::size_t i = 0; i < log.obstacles.size(); ++i) {
    const Obstacle& o = log.obstacles[i];
    Row r(kColumns);
    r[kKind] = "obstacle";
    r[kId] = std::to_string(i);
    put_vec(r, kX, o.center);
    r[kEta] = csv::fmt(o.eta);
    r[kRho0] = csv::fmt(o.rho0);
    r[kHard] = csv::fmt(o.hard_radius);
    emit(os, r);
  }
  for (const auto& t : log.ticks) {
    for (const auto& d : t.drones) {
      Row r = tick_row(t, "drone");
      r[kId] = std::to_string(d.id);
      put_vec(r, kX, d.position);
      put_vec(r, kVx, d.velocity);
      put_vec(r, kCx, d.command.as_vec());
      put_vec(r, kTx, t.target);
      r[kComponent] = std::to_string(d.component);
      emit(os, r);
    }
    for (const auto& p : t.predictions) {
      Row r = tick_row(t, "prediction");
      r[kId] = std::to_string(p.agent);
      put_vec(r, kX, p.lead_position);
      r[kOrigin] = csv::fmt(static_cast<std::int64_t>(p.origin_tick));
      r[kLead] = csv::fmt(static_cast<std::int64_t>(p.lead_tick));
      emit(os, r);
    }
    const FusionRecord& f = t.fusion;
    Row r = tick_row(t, "fusion");
    r[kId] = "-1";
    r[kStatus] = !f.present ? "none" : (f.fresh ? "fresh" : "stale");
    put_vec(r, kIx, f.intercept);
    put_vec(r, kTx, t.target);
    if (f.present) {
      put_vec(r, kX, f.lead_position);
      r[kOrigin] = csv::fmt(static_cast<std::int64_t>(f.origin_tick));
      r[kLead] = csv::fmt(static_cast<std::int64_t>(f.lead_tick));
      r[kContrib] = csv::join_ids(f.contributors);
      r[kRejected] = csv::join_ids(f.rejected);
    }
    emit(os, r);
  }
}

SimLog read_log_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw InputError("log csv line 1: empty file");
  if (line != kLogHeader) throw InputError("log csv line 1: unexpected header");
  SimLog log;
  std::size_t lineno = 1;
  bool closed = true;  // last tick ended with its fusion row
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    const std::string ctx = "log csv line " + std::to_string(lineno);
    const auto f = csv::split(line);
    if (f.size() != kColumns) throw InputError(ctx + ": expected " + std::to_string(kColumns) + " fields");
    auto d = [&](Col c) { return csv::to_double(f[c], ctx); };
    auto v3 = [&](Col c) { return Vec3{d(c), d(static_cast<Col>(c + 1)), d(static_cast<Col>(c + 2))}; };
    auto i64 = [&](Col c) { return csv::to_int(f[c], ctx); };
    const std::string_view kind = f[kKind];

    if (kind == "obstacle") {
      if (!log.ticks.empty()) throw InputError(ctx + ": obstacle rows must precede tick rows");
      log.obstacles.push_back(Obstacle{v3(kX), d(kEta), d(kRho0), d(kHard)});
      continue;
    }
    const long tick = static_cast<long>(i64(kTick));
    const double time = d(kTime);
    if (log.ticks.empty() || log.ticks.back().tick != tick) {
      if (!log.ticks.empty() && tick != log.ticks.back().tick + 1) throw InputError(ctx + ": tick out of sequence");
      if (log.ticks.empty() && tick != 0) throw InputError(ctx + ": first tick must be 0");
      if (!closed) throw InputError(ctx + ": tick " + std::to_string(log.ticks.back().tick) + " has no fusion row");
      TickRecord t;
      t.tick = tick;
      t.time = time;
      log.ticks.push_back(std::move(t));
      closed = false;
    }
    TickRecord& t = log.ticks.back();
    if (closed) throw InputError(ctx + ": row after the fusion row of tick " + std::to_string(tick));
    if (kind == "drone") {
      DroneRecord r;
      r.id = static_cast<int>(i64(kId));
      r.position = v3(kX);
      r.velocity = v3(kVx);
      r.command = CommandVector::from(v3(kCx));
      r.component = static_cast<int>(i64(kComponent));
      t.target = v3(kTx);
      t.drones.push_back(r);
    } else if (kind == "prediction") {
      AgentPredictionRecord p;
      p.agent = static_cast<int>(i64(kId));
      p.lead_position = v3(kX);
      p.origin_tick = static_cast<long>(i64(kOrigin));
      p.lead_tick = static_cast<long>(i64(kLead));
      t.predictions.push_back(p);
    } else if (kind == "fusion") {
      FusionRecord& fr = t.fusion;
      closed = true;
      const std::string_view status = f[kStatus];
      if (status != "none" && status != "stale" && status != "fresh") throw InputError(ctx + ": bad fusion status");
      fr.present = status != "none";
      fr.fresh = status == "fresh";
      fr.intercept = v3(kIx);
      t.target = v3(kTx);
      if (fr.present) {
        fr.lead_position = v3(kX);
        fr.origin_tick = static_cast<long>(i64(kOrigin));
        fr.lead_tick = static_cast<long>(i64(kLead));
        fr.contributors = csv::parse_ids(f[kContrib], ctx);
        fr.rejected = csv::parse_ids(f[kRejected], ctx);
      }
    } else {
      throw InputError(ctx + ": unknown row kind '" + std::string(kind) + "'");
    }
  }
  if (!closed) throw InputError("log csv line " + std::to_string(lineno) + ": last tick has no fusion row");
  for (auto& t : log.ticks) {
    std::map<int, std::vector<int>> comps;
    for (const auto& dr : t.drones) comps[dr.component].push_back(dr.id);
    for (auto& [idx, ids] : comps) {
      if (idx != static_cast<int>(t.components.size())) throw InputError("log csv: component indices not contiguous");
      t.components.push_back(ids);
    }
  }
  return log;
}

void write_log_file(const std::string& path, const SimLog& log) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write '" + path + "'");
  write_log_csv(out, log);
}

SimLog read_log_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read log file '" + path + "'");
  return read_log_csv(in);
}

void write_timing_csv(std::ostream& os, const SimLog& log) {
  os << "tick,agent,origin_tick,elapsed_s\n";
  for (const auto& t : log.ticks) {
    for (const auto& p : t.predictions) {
      os << t.tick << ',' << p.agent << ',' << p.origin_tick << ',' << csv::fmt(p.elapsed) << '\n';
    }
  }
}

}  // namespace bfbelp
