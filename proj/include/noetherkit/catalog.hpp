#pragma once

#include <optional>
#include <string>
#include <vector>

#include "noetherkit/integrals.hpp"
#include "noetherkit/liealg.hpp"
#include "noetherkit/parse.hpp"

namespace noetherkit {

/// A record that parses but fails a structural or consistency check.
class ValidationError : public Error {
 public:
  ValidationError(const std::string& record, const std::string& field, const std::string& what)
      : Error(record + ": " + field + ": " + what), record_(record), field_(field) {}
  const std::string& record() const noexcept { return record_; }
  const std::string& field() const noexcept { return field_; }

 private:
  std::string record_;
  std::string field_;
};

enum class RecordFlag { Verified, Reconstructed, Unverified };
std::string to_string(RecordFlag f);

struct CatalogSymmetry {
  std::string name;
  ComplexPointSymmetry Z;
  /// Empty when the record asks for the gauge to be searched.
  std::optional<Expr> gauge;
  /// Verified against the alternative Lagrangian instead of the main one.
  bool alternative = false;
  /// Checked with the classical condition on the real line (u -> f).
  bool classical = false;
  /// A failure is reported as flagged instead of failed.
  bool reconstructed = false;
};

struct CatalogOperator {
  std::string name;
  RealVectorField X;
  /// Expected Lie verdict on the system, when the record states one.
  std::optional<bool> expect_lie;
  /// Not a Noether-like operator (e.g. a bracket that leaves the span).
  bool extra = false;
};

struct CatalogIntegral {
  std::string name;
  /// Name of the generating symmetry.
  std::string symmetry;
  /// Transcription of the printed formula, if any.
  std::optional<IntegralPair> printed;
  /// What the checks run on: the printed pair, or a corrected reading.
  IntegralPair reading;
  bool corrected = false;
  std::string note;
};

struct CatalogAlgebra {
  std::string name;
  std::vector<std::string> basis;
  std::optional<bool> closed;
  std::vector<std::string> printed;  // "[Xi,Xj] = ..." lines
  /// Printed entries must match exactly; otherwise differences are reported.
  bool exact = true;
  /// Operator the single non-spanned bracket must equal, up to scalar.
  std::optional<std::string> residual;
};

struct CatalogTrajectory {
  TrajectoryStart start;
  double T = 1.0;
  double step = 1e-3;
  std::vector<Expr> guards;
};

struct CatalogRecord {
  std::string name;
  std::string description;
  std::string file;
  RecordFlag flag = RecordFlag::Verified;

  Expr lagrangian;
  std::optional<Expr> alt_lagrangian;
  /// Printed real Lagrangian pair.
  std::optional<std::pair<Expr, Expr>> real_lagrangians;
  /// Printed real Lagrangian used for classical checks (over f, f').
  std::optional<Expr> classical_lagrangian;
  /// Printed r-CODE right-hand side, when stated.
  std::optional<Expr> rcode;
  System2 system;
  std::string system_source;

  std::vector<CatalogSymmetry> symmetries;
  std::vector<CatalogOperator> operators;
  std::vector<CatalogIntegral> integrals;
  std::vector<CatalogAlgebra> algebras;

  SampleDomain domain;
  std::optional<CatalogTrajectory> trajectory;

  int expected_operators = 0;
  /// Count complex symmetries instead of their real split operators.
  bool count_complex = false;
  bool coupled_required = false;
  /// Expected number of linearly independent integral components.
  std::optional<int> independent_integrals;
};

struct LoadOptions {
  /// Run the Lagrangian/system consistency check while loading.
  bool check_consistency = true;
  ZeroTestOptions zero;
};

/// Parses one record file. Throws ParseError (with line and column) or
/// ValidationError (naming record and field).
std::optional<CatalogRecord> parse_record(const std::string& text, const std::string& file,
                                          const LoadOptions& opts = {});
/// A directory (every *.rec, sorted by name) or a single file.
std::vector<CatalogRecord> load_catalog(const std::string& path, const LoadOptions& opts = {});

/// Bundled corpus location baked in at build time.
std::string default_catalog_dir();

/// Operators obtained by splitting every symmetry; zero fields dropped.
std::vector<NamedField> split_operators(const CatalogRecord& r);
/// Number of Noether-like operators as counted by the record.
int operator_count(const CatalogRecord& r);

enum class ClaimVerdict { Pass, Fail, ExpectedFail, Flagged, Info };
std::string to_string(ClaimVerdict v);

struct Claim {
  std::string claim;
  ClaimVerdict verdict = ClaimVerdict::Pass;
  std::string detail;
  std::optional<Point> witness;
  std::optional<double> drift;
};

struct RecordReport {
  std::string record;
  std::vector<Claim> claims;
  /// No claim has verdict Fail.
  bool ok() const;
  const Claim* find(const std::string& claim) const;
};

struct VerifyOptions {
  ZeroTestOptions zero;
  std::optional<std::uint64_t> seed;
  /// Drift threshold for the trajectory oracle.
  double drift_tol = 1e-6;
};

RecordReport verify_record(const CatalogRecord& r, const VerifyOptions& opts = {});

/// Array of {record, claim, verdict, detail, witness?, drift?} objects.
std::string report_json(const std::vector<RecordReport>& reports);
/// One line per claim: "record  claim  verdict  detail".
std::string report_text(const std::vector<RecordReport>& reports);

/// Helpers shared with the acceptance driver.
const CatalogRecord& find_record(const std::vector<CatalogRecord>& records, const std::string& name);
const CatalogOperator* find_operator(const CatalogRecord& r, const std::string& name);
const CatalogSymmetry* find_symmetry(const CatalogRecord& r, const std::string& name);
/// Field equality up to a nonzero constant factor, decided by sampling.
bool proportional(const RealVectorField& a, const RealVectorField& b, const SampleDomain& dom,
                  const ZeroTestOptions& opts = {});
std::string point_to_string(const Point& p);

}  // namespace noetherkit
