"""Persistence layer: migrations, round-trips, constraints, and the photo store."""

from datetime import date, datetime, timedelta, timezone

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from desamon.core.types import (
    Activity,
    DEFAULT_TRANCHE_CONFIG,
    Desa,
    Kecamatan,
    Money,
    Percent,
    PhotoAttachment,
    Program,
    ProgramKind,
    ProgressReport,
    Role,
    TargetEntry,
    TrancheConfig,
    UserAccount,
    WorkTargetPlan,
    new_id,
)
from desamon.disbursement import DisbursementStage, StageStatus, plan_tranches
from desamon.errors import Conflict, NotFound
from desamon.storage import Database, PhotoStore, content_hash


def seed_master(repo):
    program = Program(id="prog-1", kind=ProgramKind.PIP, fiscal_year=2014, name="PIP 2014")
    kecamatan = Kecamatan(id="kec-1", name="Praya Barat")
    desa = Desa(id="desa-1", kecamatan_id="kec-1", name="Batujai")
    activity = Activity(id="act-1", program_id="prog-1", desa_id="desa-1",
                        title="Rabat beton", budget=Money(250_000_000),
                        start_period=1, end_period=20)
    repo.insert_program(program)
    repo.insert_kecamatan(kecamatan)
    repo.insert_desa(desa)
    repo.insert_activity(activity)
    return program, kecamatan, desa, activity


def make_report(activity_id="act-1", period=2, bp=1000, absorbed=0, rid=None,
                submitted_at=None):
    return ProgressReport(
        id=rid or new_id(),
        activity_id=activity_id,
        period=period,
        physical=Percent(bp),
        financial_absorbed=Money(absorbed),
        labor_count=7,
        submitted_by="petugas1",
        submitted_at=submitted_at or datetime(2014, 1, 19, 9, 0, tzinfo=timezone.utc),
    )


class TestMigrations:
    def test_migrate_idempotent(self, tmp_path):
        db = Database(tmp_path / "x.db")
        first = db.migrate()
        assert first >= 1
        assert db.migrate() == first
        assert db.schema_version() == first

    def test_virgin_store_reports_zero(self, tmp_path):
        assert Database(tmp_path / "y.db").schema_version() == 0


class TestMasterData:
    def test_program_round_trip(self, store):
        with store.transaction() as repo:
            program, *_ = seed_master(repo)
        with store.snapshot() as repo:
            assert repo.get_program("prog-1") == program
            assert repo.find_program(ProgramKind.PIP, 2014, "PIP 2014") == program
            assert repo.find_program(ProgramKind.PAMSIMAS, 2014, "PIP 2014") is None
            assert repo.list_programs() == [program]

    def test_duplicate_program_name_conflicts(self, store):
        with store.transaction() as repo:
            seed_master(repo)
        with pytest.raises(Conflict):
            with store.transaction() as repo:
                repo.insert_program(Program(id="prog-2", kind=ProgramKind.PIP,
                                            fiscal_year=2014, name="PIP 2014"))

    def test_update_round_trip_and_missing(self, store):
        with store.transaction() as repo:
            program, *_ = seed_master(repo)
        renamed = Program(id="prog-1", kind=ProgramKind.PIP, fiscal_year=2014,
                          name="PIP Kabupaten 2014")
        with store.transaction() as repo:
            repo.update_program(renamed)
        with store.snapshot() as repo:
            assert repo.get_program("prog-1") == renamed
        with pytest.raises(NotFound):
            with store.transaction() as repo:
                repo.update_program(Program(id="ghost", kind=ProgramKind.PIP,
                                            fiscal_year=2014, name="x"))

    def test_delete_program_with_activities_blocked(self, store):
        with store.transaction() as repo:
            seed_master(repo)
        with pytest.raises(Conflict):
            with store.transaction() as repo:
                repo.delete_program("prog-1")

    def test_desa_scoped_lookups(self, store):
        with store.transaction() as repo:
            seed_master(repo)
            repo.insert_kecamatan(Kecamatan(id="kec-2", name="Pujut"))
            repo.insert_desa(Desa(id="desa-2", kecamatan_id="kec-2", name="Kuta"))
        with store.snapshot() as repo:
            assert repo.find_desa("kec-1", "Batujai").id == "desa-1"
            assert repo.find_desa("kec-2", "Batujai") is None
            assert [d.id for d in repo.list_desa("kec-2")] == ["desa-2"]
            assert len(repo.list_desa()) == 2

    def test_same_desa_name_allowed_across_kecamatan(self, store):
        with store.transaction() as repo:
            seed_master(repo)
            repo.insert_kecamatan(Kecamatan(id="kec-2", name="Pujut"))
            repo.insert_desa(Desa(id="desa-2", kecamatan_id="kec-2", name="Batujai"))
        with pytest.raises(Conflict):
            with store.transaction() as repo:
                repo.insert_desa(Desa(id="desa-3", kecamatan_id="kec-1", name="Batujai"))

    def test_activity_filters(self, store):
        with store.transaction() as repo:
            seed_master(repo)
            repo.insert_kecamatan(Kecamatan(id="kec-2", name="Pujut"))
            repo.insert_desa(Desa(id="desa-2", kecamatan_id="kec-2", name="Kuta"))
            repo.insert_activity(Activity(id="act-2", program_id="prog-1",
                                          desa_id="desa-2", title="Talud",
                                          budget=Money(120_000_000),
                                          start_period=3, end_period=18))
        with store.snapshot() as repo:
            assert {a.id for a in repo.list_activities()} == {"act-1", "act-2"}
            assert [a.id for a in repo.list_activities(desa_id="desa-2")] == ["act-2"]
            assert [a.id for a in repo.list_activities(kecamatan_id="kec-1")] == ["act-1"]
            assert len(repo.list_activities(program_id="prog-1")) == 2
            assert repo.find_activity("prog-1", "desa-2", "Talud").id == "act-2"
            assert [a.id for a in repo.find_activity_by_title("Talud")] == ["act-2"]

    def test_activity_tranche_config_round_trips(self, store):
        custom = TrancheConfig((Percent(5000), Percent(2500), Percent(2500)))
        with store.transaction() as repo:
            seed_master(repo)
            repo.insert_activity(Activity(id="act-2", program_id="prog-1",
                                          desa_id="desa-1", title="Sumur",
                                          budget=Money(90_000_000), start_period=1,
                                          end_period=10, tranche_config=custom))
        with store.snapshot() as repo:
            assert repo.get_activity("act-2").tranche_config == custom
            assert repo.get_activity("act-1").tranche_config == DEFAULT_TRANCHE_CONFIG


class TestWorkTargets:
    def test_replace_wholesale(self, store):
        plan_a = WorkTargetPlan("act-1", (
            TargetEntry(5, Percent(2500), Money(62_500_000)),
            TargetEntry(20, Percent(10_000), Money(250_000_000)),
        ))
        plan_b = WorkTargetPlan("act-1", (
            TargetEntry(10, Percent(5000), Money(125_000_000)),
            TargetEntry(20, Percent(10_000), Money(250_000_000)),
        ))
        with store.transaction() as repo:
            seed_master(repo)
            repo.set_work_target_plan(plan_a)
        with store.transaction() as repo:
            repo.set_work_target_plan(plan_b)
        with store.snapshot() as repo:
            assert repo.get_work_target_plan("act-1") == plan_b

    def test_missing_plan_is_none(self, store):
        with store.transaction() as repo:
            seed_master(repo)
        with store.snapshot() as repo:
            assert repo.get_work_target_plan("act-1") is None


class TestStages:
    def test_round_trip_and_replace(self, store):
        stages = plan_tranches(Money(250_000_000), DEFAULT_TRANCHE_CONFIG, "act-1")
        with store.transaction() as repo:
            seed_master(repo)
            repo.insert_stages(stages)
        disbursed = DisbursementStage(
            activity_id="act-1", stage_number=1, planned_amount=Money(100_000_000),
            actual_amount=Money(95_000_000), disbursed_on=date(2014, 1, 20),
            status=StageStatus.DISBURSED,
        )
        with store.transaction() as repo:
            repo.replace_stage(disbursed)
        with store.snapshot() as repo:
            loaded = repo.get_stages("act-1")
            assert [s.stage_number for s in loaded] == [1, 2, 3]
            assert loaded[0] == disbursed
            assert loaded[1].status is StageStatus.PLANNED

    def test_replace_unknown_stage(self, store):
        with store.transaction() as repo:
            seed_master(repo)
        with pytest.raises(NotFound):
            with store.transaction() as repo:
                repo.replace_stage(DisbursementStage(
                    activity_id="act-1", stage_number=2, planned_amount=Money(1)))


class TestReports:
    def test_ordering_and_filters(self, store):
        early = make_report(period=2, rid="r2")
        late = make_report(period=5, bp=3000, rid="r5",
                           submitted_at=datetime(2014, 2, 10, 9, 0, tzinfo=timezone.utc))
        with store.transaction() as repo:
            seed_master(repo)
            repo.insert_report(late)
            repo.insert_report(early)
        with store.snapshot() as repo:
            assert [r.id for r in repo.list_reports("act-1")] == ["r2", "r5"]
            assert repo.latest_report("act-1").id == "r5"
            assert repo.latest_report("act-1", before_period=5).id == "r2"
            assert repo.next_report_after("act-1", 2).id == "r5"
            assert repo.next_report_after("act-1", 5) is None
            assert repo.active_report_for_period("act-1", 2).id == "r2"
            assert repo.active_report_for_period("act-1", 3) is None

    def test_supersede_keeps_history(self, store):
        original = make_report(period=2, rid="r-old")
        replacement = make_report(period=2, bp=1500, rid="r-new",
                                  submitted_at=datetime(2014, 1, 21, 9, 0,
                                                        tzinfo=timezone.utc))
        with store.transaction() as repo:
            seed_master(repo)
            repo.insert_report(original)
            repo.mark_report_superseded("r-old")
            repo.insert_report(replacement)
        with store.snapshot() as repo:
            assert [r.id for r in repo.list_reports("act-1")] == ["r-new"]
            both = repo.list_reports("act-1", include_superseded=True)
            assert {r.id for r in both} == {"r-old", "r-new"}
            assert repo.is_superseded("r-old")
            assert not repo.is_superseded("r-new")
            assert repo.superseded_ids("act-1") == {"r-old"}
            assert repo.active_report_for_period("act-1", 2).id == "r-new"
            assert repo.get_report("r-old").physical == Percent(1000)

    def test_duplicate_active_period_conflicts(self, store):
        with store.transaction() as repo:
            seed_master(repo)
            repo.insert_report(make_report(period=2))
        with pytest.raises(Conflict):
            with store.transaction() as repo:
                repo.insert_report(make_report(period=2))

    def test_report_requires_activity(self, store):
        with store.transaction() as repo:
            seed_master(repo)
        with pytest.raises(Conflict):
            with store.transaction() as repo:
                repo.insert_report(make_report(activity_id="ghost"))

    def test_photos_persist_with_report(self, store):
        photo = PhotoAttachment(id="ph-1", report_id="r-1", content_hash="a" * 64,
                                caption="galian pondasi",
                                achieved_at_percent=Percent(900),
                                media_type="image/jpeg")
        with store.transaction() as repo:
            seed_master(repo)
            repo.insert_report(ProgressReport(
                id="r-1", activity_id="act-1", period=2, physical=Percent(1000),
                financial_absorbed=Money(0), labor_count=5, submitted_by="p",
                submitted_at=datetime(2014, 1, 19, tzinfo=timezone.utc),
                photos=(photo,)))
        with store.snapshot() as repo:
            assert repo.get_report("r-1").photos == (photo,)
            assert repo.list_photos("r-1") == [photo]
            assert repo.get_photo("ph-1") == photo


class TestUsersAndAudit:
    def test_user_round_trip(self, store):
        user = UserAccount(id="u-1", username="admin", password_hash="scrypt$x",
                           role=Role.ADMIN)
        with store.transaction() as repo:
            repo.insert_user(user)
        with store.snapshot() as repo:
            assert repo.get_user("u-1") == user
            assert repo.find_user_by_username("admin") == user
            assert repo.find_user_by_username("nobody") is None
            assert repo.list_users() == [user]

    def test_duplicate_username_conflicts(self, store):
        with store.transaction() as repo:
            repo.insert_user(UserAccount(id="u-1", username="admin",
                                         password_hash="h", role=Role.ADMIN))
        with pytest.raises(Conflict):
            with store.transaction() as repo:
                repo.insert_user(UserAccount(id="u-2", username="admin",
                                             password_hash="h", role=Role.PETUGAS))

    def test_audit_appends_in_order(self, store):
        with store.transaction() as repo:
            repo.append_audit("admin", "create_program", "program", "prog-1")
            repo.append_audit("admin", "update_program", "program", "prog-1",
                              detail="renamed")
        with store.snapshot() as repo:
            entries = repo.list_audit()
            # Newest first: the log is read backwards from the present.
            assert [e.action for e in entries] == ["update_program", "create_program"]
            assert entries[0].detail == "renamed"
            assert entries[0].actor == "admin"
            assert entries[0].at is not None
            assert repo.list_audit(limit=1)[0].action == "update_program"


class TestPropertyRoundTrip:
    @settings(max_examples=25, deadline=None)
    @given(st.lists(
        st.tuples(st.integers(1, 52), st.integers(0, 10_000), st.integers(0, 10**9)),
        min_size=1, max_size=8, unique_by=lambda t: t[0],
    ))
    def test_any_report_batch_round_trips_ordered(self, tmp_path_factory, batch):
        db = Database(tmp_path_factory.mktemp("prop") / "store.db")
        db.migrate()
        with db.transaction() as repo:
            seed_master(repo)
            base = datetime(2014, 1, 1, tzinfo=timezone.utc)
            for period, bp, absorbed in batch:
                repo.insert_report(ProgressReport(
                    id=f"r{period}", activity_id="act-1", period=period,
                    physical=Percent(bp), financial_absorbed=Money(absorbed),
                    labor_count=0, submitted_by="p",
                    submitted_at=base + timedelta(days=period),
                ))
        with db.snapshot() as repo:
            loaded = repo.list_reports("act-1")
            assert [r.period for r in loaded] == sorted(t[0] for t in batch)
            by_period = {t[0]: t for t in batch}
            for r in loaded:
                _, bp, absorbed = by_period[r.period]
                assert r.physical == Percent(bp)
                assert r.financial_absorbed == Money(absorbed)


class TestPhotoStore:
    def test_put_get_verify(self, tmp_path):
        blob = b"\xff\xd8\xff a jpeg-ish blob"
        photos = PhotoStore(tmp_path / "photos")
        digest = photos.put(blob)
        assert digest == content_hash(blob)
        assert photos.get(digest) == blob
        assert photos.exists(digest)
        assert photos.verify(digest)
        assert photos.put(blob) == digest  # idempotent

    def test_get_missing(self, tmp_path):
        photos = PhotoStore(tmp_path / "photos")
        with pytest.raises(NotFound):
            photos.get("0" * 64)

    def test_path_rejects_non_hash(self, tmp_path):
        photos = PhotoStore(tmp_path / "photos")
        with pytest.raises(ValueError):
            photos.path_for("../../etc/passwd")

    def test_verify_detects_tamper(self, tmp_path):
        photos = PhotoStore(tmp_path / "photos")
        digest = photos.put(b"original")
        photos.path_for(digest).write_bytes(b"tampered")
        assert not photos.verify(digest)
