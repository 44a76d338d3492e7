#!/usr/bin/env python3
"""Builds the bundled molecule fixture in the QM9 .xyz layout.

Each molecule (2-5 heavy atoms from C, N, O, F) is embedded with RDKit
(ETKDG + MMFF). Electronic properties come from PySCF RHF/6-31G at the MMFF
geometry; vibrational and thermal properties from a finite-difference MMFF
Hessian with rigid-rotor / harmonic-oscillator thermochemistry at 298.15 K.

Units follow QM9: A, B, C in GHz; mu in Debye; alpha in Bohr^3; homo, lumo,
gap, zpve, U0, U, H, G in Hartree; r2 in Bohr^2; Cv in cal/(mol K).

Usage: make_qm9_fixture.py OUT_DIR [--count 97]
"""

import argparse
import os

import numpy as np
from pyscf import gto, scf
from pyscf.hessian import thermo
from rdkit import Chem
from rdkit.Chem import AllChem
from rdkit.Chem import rdForceFieldHelpers as ffh

SMILES = [
    # two heavy atoms
    "CC", "C=C", "C#C", "CO", "C=O", "CN", "C#N", "CF", "C=N",
    # three heavy atoms
    "CCC", "CC=C", "CC#C", "C=C=C", "CCO", "CC=O", "COC", "CCN", "CC#N", "CNC",
    "OC=O", "NC=O", "C1CC1", "C1CO1", "C1CN1", "CCF", "FCF", "NCN", "O=C=O",
    "C=CF", "FC#C", "C=C=O", "NC#N", "C=CO", "OCO",
    # four heavy atoms
    "CCCC", "CC(C)C", "CC=CC", "C=CC=C", "CC#CC", "CCCO", "CC(C)O", "CCOC",
    "CC(C)=O", "CCC=O", "CC(=O)O", "CC(N)=O", "COC=O", "CCCN", "CC(C)N",
    "CCC#N", "C1CCC1", "CC1CC1", "C1COC1", "C1CNC1", "OCCO", "NCCO", "NCCN",
    "C#CC#C", "N#CC#N", "C=CC#N", "C=CC=O", "O=CC=O", "CC(F)F", "FC(F)F",
    "CC(=O)F", "OC1CC1", "NC1CC1", "CN(C)C", "OCC#N", "CNC=O", "OCC=O",
    # five heavy atoms
    "CCCCC", "CC(C)CC", "CC(C)(C)C", "C1CCCC1", "CCCCO", "CCC(C)O",
    "CC(C)(C)O", "CCOCC", "CCCC=O", "CCC(C)=O", "CC(=O)OC", "CCC(=O)O",
    "CC(C)C=O", "C1CCOC1", "C1CCNC1", "c1ccoc1", "c1cc[nH]c1", "c1cocn1",
    "c1c[nH]cn1", "c1cn[nH]c1", "C=CC=CC", "CCCC#N", "CC(C)C#N", "NCCCO",
    "OCCCO", "CC(O)CO", "CC(=O)NC", "CN(C)C=O", "NC(=O)CO", "OC(=O)CO",
    "OCC(F)F", "CC(F)(F)F", "OC1CCC1", "N#CC1CC1", "CC1CCC1", "CC1(C)CC1",
    "CC(=O)C=C", "CC#CCC", "C=CCCO",
]

KCAL_PER_HARTREE = 627.509474
BOHR_PER_ANGSTROM = 1.0 / 0.52917721092


def embed(smiles, seed=7):
    mol = Chem.AddHs(Chem.MolFromSmiles(smiles))
    params = AllChem.ETKDGv3()
    params.randomSeed = seed
    if AllChem.EmbedMolecule(mol, params) != 0:
        raise RuntimeError("embedding failed")
    props = ffh.MMFFGetMoleculeProperties(mol)
    ff = ffh.MMFFGetMoleculeForceField(mol, props)
    ff.Minimize(maxIts=5000, forceTol=1e-8, energyTol=1e-12)
    return mol, ff


def mmff_hessian(ff, step=1e-4):
    """Central-difference Hessian of MMFF energy, Hartree/Bohr^2, (n, n, 3, 3)."""
    x0 = np.array(ff.Positions(), dtype=float)
    n = x0.size // 3
    hess = np.zeros((x0.size, x0.size))
    for k in range(x0.size):
        xp = x0.copy()
        xp[k] += step
        xm = x0.copy()
        xm[k] -= step
        hess[k] = (np.array(ff.CalcGrad(xp.tolist())) - np.array(ff.CalcGrad(xm.tolist()))) / (2 * step)
    hess = 0.5 * (hess + hess.T)
    hess /= KCAL_PER_HARTREE * BOHR_PER_ANGSTROM**2
    return hess.reshape(n, 3, n, 3).transpose(0, 2, 1, 3)


def to_pyscf(mol):
    conf = mol.GetConformer()
    atoms = []
    for a in mol.GetAtoms():
        p = conf.GetAtomPosition(a.GetIdx())
        atoms.append((a.GetSymbol(), (p.x, p.y, p.z)))
    return atoms


def run_scf(atoms, field=None):
    m = gto.M(atom=atoms, basis="6-31g", unit="Angstrom", verbose=0)
    mf = scf.RHF(m)
    mf.conv_tol = 1e-10
    if field is not None:
        h0 = mf.get_hcore()
        with m.with_common_orig(np.zeros(3)):
            dip = m.intor_symmetric("int1e_r", comp=3)
        mf.get_hcore = lambda *args: h0 + np.einsum("x,xij->ij", field, dip)
    mf.kernel()
    if not mf.converged:
        raise RuntimeError("SCF did not converge")
    return m, mf


def cv_cal(t):
    # thermo reports Cv in Eh/K; convert to cal/(mol K).
    return t * KCAL_PER_HARTREE * 1000.0


def properties(smiles):
    mol, ff = embed(smiles)
    atoms = to_pyscf(mol)
    m, mf = run_scf(atoms)

    nocc = int(np.count_nonzero(mf.mo_occ > 0))
    homo = mf.mo_energy[nocc - 1]
    lumo = mf.mo_energy[nocc]
    mu = float(np.linalg.norm(mf.dip_moment(unit="Debye", verbose=0)))

    masses = m.atom_mass_list(isotope_avg=False)
    coords = m.atom_coords()
    com = masses @ coords / masses.sum()
    dm = mf.make_rdm1()
    with m.with_common_orig(com):
        r2 = float(np.einsum("ij,ji->", m.intor_symmetric("int1e_r2"), dm))

    e = 0.002
    alpha = 0.0
    for axis in range(3):
        f = np.zeros(3)
        f[axis] = e
        _, mp = run_scf(atoms, f)
        _, mm = run_scf(atoms, -f)
        dp = mp.dip_moment(unit="AU", verbose=0)[axis]
        dmn = mm.dip_moment(unit="AU", verbose=0)[axis]
        alpha += (dp - dmn) / (2 * e) / 3.0

    rot = thermo.rotation_const(masses, coords, unit="GHz")
    rot = np.where(np.isfinite(rot), rot, 0.0)  # linear molecules: A = 0
    freq = thermo.harmonic_analysis(m, mmff_hessian(ff), imaginary_freq=False)
    t = thermo.thermo(mf, freq["freq_au"], 298.15, 101325)
    zpve = t["ZPE"][0]
    u0 = mf.e_tot + zpve
    return {
        "A": rot[0], "B": rot[1], "C": rot[2], "mu": mu, "alpha": alpha,
        "homo": homo, "lumo": lumo, "gap": lumo - homo, "r2": r2, "zpve": zpve,
        "U0": u0, "U": t["E_tot"][0], "H": t["H_tot"][0], "G": t["G_tot"][0],
        "Cv": cv_cal(t["Cv_tot"][0]),
    }, mol, freq["freq_wavenumber"]


ORDER = ["A", "B", "C", "mu", "alpha", "homo", "lumo", "gap", "r2", "zpve", "U0", "U", "H", "G", "Cv"]


def write_xyz(path, index, smiles, props, mol, freqs):
    conf = mol.GetConformer()
    with open(path, "w") as out:
        out.write(f"{mol.GetNumAtoms()}\n")
        out.write("gdb " + str(index) + "\t" + "\t".join(f"{props[k]:.8g}" for k in ORDER) + "\n")
        for a in mol.GetAtoms():
            p = conf.GetAtomPosition(a.GetIdx())
            out.write(f"{a.GetSymbol()}\t{p.x:.10f}\t{p.y:.10f}\t{p.z:.10f}\t0.0\n")
        out.write("\t".join(f"{f:.4f}" for f in np.real(freqs)) + "\n")
        out.write(f"{smiles}\t{Chem.MolToSmiles(Chem.RemoveHs(mol))}\n")
        out.write("fixture\tfixture\n")


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("out")
    ap.add_argument("--count", type=int, default=97)
    args = ap.parse_args()
    os.makedirs(args.out, exist_ok=True)
    written = 0
    for smiles in SMILES:
        if written == args.count:
            break
        try:
            props, mol, freqs = properties(smiles)
        except Exception as exc:  # noqa: BLE001
            print(f"skip {smiles}: {exc}")
            continue
        written += 1
        write_xyz(os.path.join(args.out, f"mol_{written:03d}.xyz"), written, smiles, props, mol, freqs)
        print(f"{written:3d} {smiles}")
    if written < args.count:
        raise SystemExit(f"only {written} molecules written")


if __name__ == "__main__":
    main()
