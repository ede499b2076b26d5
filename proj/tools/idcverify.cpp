// Standalone ledger verifier. Links only the ledger and core libraries:
// auditing a ledger requires the file bytes and SHA-256, nothing else.

#include <cstdio>

#include "idc/ledger/verify.hpp"

int main(int argc, char** argv) {
  if (argc != 2) {
    std::fprintf(stderr, "usage: idcverify <ledger.idledger>\n");
    return 1;
  }
  const idc::VerificationReport report = idc::verify_chain(argv[1]);
  if (report.ok) {
    std::printf("ok: %llu records, chain verified\n",
                static_cast<unsigned long long>(report.records_checked));
    return 0;
  }
  std::printf("TAMPERED at seq %llu: %.*s (%s)\n",
              static_cast<unsigned long long>(*report.first_bad_seq),
              static_cast<int>(idc::verify_failure_name(*report.reason).size()),
              idc::verify_failure_name(*report.reason).data(), report.detail.c_str());
  return 2;
}
