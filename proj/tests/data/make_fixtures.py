"""Regenerate the FCIDUMP fixtures and their reference energies.

Requires PySCF. Not needed to build or run the test suite; the generated
files are checked in.
"""
import json
import pathlib

from pyscf import cc, fci, gto, mp, scf
from pyscf.tools import fcidump

HERE = pathlib.Path(__file__).resolve().parent

SYSTEMS = {
    "n2_sto3g_r1.00": ("N 0 0 0; N 0 0 1.00", "sto-3g"),
    "n2_sto3g_r2.50": ("N 0 0 0; N 0 0 2.50", "sto-3g"),
    "lih_sto3g_r1.60": ("Li 0 0 0; H 0 0 1.60", "sto-3g"),
    "h6_sto3g_r1.00": ("; ".join(f"H 0 0 {1.0 * k:.2f}" for k in range(6)), "sto-3g"),
    "h4_sto3g_r1.50": ("; ".join(f"H 0 0 {1.5 * k:.2f}" for k in range(4)), "sto-3g"),
    "h2_sto3g_r0.74": ("H 0 0 0; H 0 0 0.74", "sto-3g"),
    "h2_631g_r0.74": ("H 0 0 0; H 0 0 0.74", "6-31g"),
}


def main():
    refs = {}
    for name, (atom, basis) in SYSTEMS.items():
        mol = gto.M(atom=atom, basis=basis, unit="Angstrom", verbose=0)
        mf = scf.RHF(mol)
        mf.conv_tol = 1e-12
        e_hf = mf.kernel()
        fcidump.from_scf(mf, str(HERE / f"{name}.fcidump"), tol=1e-15)
        solver = fci.FCI(mf)
        solver.conv_tol = 1e-14
        solver.max_cycle = 500
        solver.max_space = 30
        # several roots keep the Davidson search from stalling on an excited state
        e_roots, _ = solver.kernel(nroots=3)
        e_fci = float(min(e_roots))
        e_mp2 = mp.MP2(mf).kernel()[0]
        mycc = cc.CCSD(mf)
        mycc.conv_tol = 1e-12
        mycc.conv_tol_normt = 1e-10
        mycc.max_cycle = 300
        mycc.kernel()
        refs[name] = {
            "norb": int(mol.nao),
            "nelec": int(mol.nelectron),
            "e_hf": e_hf,
            "e_fci": e_fci,
            "e_mp2_corr": e_mp2,
            "e_ccsd": e_hf + mycc.e_corr if mycc.converged else None,
        }
        print(name, refs[name])
    (HERE / "reference_energies.json").write_text(json.dumps(refs, indent=2) + "\n")


if __name__ == "__main__":
    main()
