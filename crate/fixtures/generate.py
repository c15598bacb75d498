import json, csv, os, sys
# each step: (template_label, text); case: (id, name, type, [steps])
def S(label, text): return (label, text)
LOGIN = [S("login","Log in to the game with a test account"),
         S("login","Login to the game using a test account"),
         S("login","Log into the game with the test account")]
cases = []
def case(name, typ, steps, family=None):
    cases.append((name, typ, steps, family))

# planted family F1
case("Equip Hat", "Inventory", [LOGIN[0], S("bp_open","Open the backpack"), S("eq_select","Select the hat in the backpack"), S("eq_click","Click the Equip button"), S("eq_verify","Verify the selected item is equipped on the character")], "F1")
# filler
case("Change Music Volume", "Settings", [LOGIN[0], S("settings_open","Open the settings menu"), S("o1_slider","Move the music volume slider to the left"), S("o1_verify","Verify the music volume decreases")])
case("Send Friend Request", "Social", [LOGIN[1], S("friends_open","Open the friends list"), S("o4_code","Enter the friend code of another player"), S("o4_verify","Verify the request appears as pending")])
# planted F2
case("Check Hat in Backpack", "Inventory", [LOGIN[0], S("shop_buy","Buy a hat from the shop"), S("bp_open","Open the backpack"), S("chk_tab","Go to the Hats tab"), S("chk_verify","Verify the purchased item is listed in the backpack")], "F2")
case("Complete Math Battle", "Battle", [LOGIN[0], S("battle_start","Start a battle with a monster"), S("o6_answer","Answer the math question correctly"), S("o6_verify","Verify the monster loses health")])
case("Mute Sound Effects", "Settings", [LOGIN[2], S("settings_open","Click the gear icon to open setings"), S("o2_toggle","Turn off the sound effects toggle"), S("o2_verify","Verify no sound effects play during battle")])
# planted F3
case("Use Consumables in Battle", "Battle", [LOGIN[0], S("battle_start","Start a battle with a monster"), S("cons_open","Open the consumables menu during the battle"), S("cons_use","Use a health potion"), S("cons_verify","Verify the health bar increases")], "F3")
case("Claim Daily Reward", None, [LOGIN[0], S("o7_wait","Wait for the daily reward popup to appear"), S("o7_claim","Click the Claim button"), S("o7_verify","Verify gold is added to the account")])
case("Accept Friend Request", "Social", [S("login_b","Log in to the game with a second test account"), S("friends_open","Open the friends list"), S("o5_accept","Click Accept on the pending request"), S("o5_verify","Verify the new friend is shown in the friends list")])
# planted F4
case("Catch Firefly in Forest", "Quests", [LOGIN[0], S("ff_travel","Travel to the Firefly Forest with the map"), S("ff_net","Equip the firefly net"), S("ff_catch","Click on a firefly to catch it"), S("ff_verify","Verify the firefly is added to the collection")], "F4")
case("Buy Item from Shop", "Shop", [LOGIN[1], S("o8_travel","Travel to the shop in Lamplight Town"), S("o8_select","Select a hat from the shop items"), S("o8_verify","Verify the gold balance is reduced")])
case("Travel to Lamplight Town", "Map", [LOGIN[0], S("map_open","Open the world map"), S("o9_click","Click on Lamplight Town"), S("o9_verify","Verify the character arrives in Lamplight Town")])
case("Hatch Pet Egg", "Pets", [LOGIN[0], S("pets_open","Open the pets menu"), S("o10_select","Select the pet egg"), S("o10_verify","Verify a new pet hatches from the egg")])
case("Equip Wand", "Inventory", [LOGIN[0], S("bp_open","Open your backpak"), S("eq_select","Select the wand in the backpack"), S("eq_click","Click on the Equip button"), S("eq_verify","Verify that the selected item is equipped on the character")], "F1")
case("Rename Pet", "Pets", [LOGIN[2], S("pets_open","Open the pets menu"), S("o11_pencil","Click the pencil icon next to the pet name"), S("o11_type","Type a new pet name and save")])
case("Decorate House", "House", [LOGIN[0], S("o12_enter","Enter the house from the main menu"), S("o12_drag","Drag a chair from the furniture list into the room"), S("o12_verify","Verify the chair stays in place after leaving the house")])
case("Join Arena Match", "Arena", [LOGIN[0], S("map_open","Open the map"), S("o13_travel","Travel to the arena"), S("o13_verify","Verify an opponent is matched within one minute")])
case("Eat Food during Battle", "Battle", [LOGIN[0], S("battle_start","Start a battle with the monster"), S("cons_open","Open the consumables menu during battle"), S("cons_use","Eat a piece of food"), S("cons_verify","Verify that the health bar increases")], "F3")
case("View Leaderboard", "Arena", [LOGIN[0], S("o14_open","Open the arena leaderboard"), S("o14_scroll","Scroll to the bottom of the leaderboard"), S("o14_verify","Verify the player rank is highlighted")])
case("Change Hair Style", None, [LOGIN[1], S("o15_open","Open the character edit screen"), S("o15_pick","Pick a different hair style"), S("o15_verify","Verify the hair style changes on the character")])
case("Link Child to Parent Account", "Parents", [S("o16_login","Log in to the parent portal"), S("o16_enter","Enter the child username"), S("o16_click","Click the Link button"), S("o16_verify","Verify the child appears on the parent dashboard")])
case("Catch fireflies in Firefly Forest", None, [LOGIN[0], S("ff_travel","Travel with the map to the Firefly Forest"), S("ff_catch","Catch a firefly with a click"), S("ff_verify","Verify the collection has the firefly added")], "F4")
case("Teacher Creates Assignment", "Education", [S("o17_login","Log in to the teacher dashboard"), S("o17_create","Click Create Assignment"), S("o17_choose","Choose the math skills for the assignment"), S("o17_assign","Assign it to the whole class"), S("o17_verify","Verify the assignment is listed as active")])
case("Student Completes Assignment", "Education", [S("o18_login","Log in as a student of the class"), S("o18_answer","Answer all questions in the assignment"), S("o18_verify","Verify the assignment is marked as completed on the teacher dashboard"), S("again_it","Do it again")])
case("Log Out", "Settings", [LOGIN[0], S("settings_open","Open the settings menu"), S("o19_click","Click the Log Out button"), S("o19_verify","Verify the login screen is displayed")])
case("Check Wand in Backpack", "Inventory", [LOGIN[0], S("shop_buy","Buy a wand from the shop"), S("bp_open","Open the backpak"), S("chk_tab","Go to the Wands tab"), S("chk_verify","Verify that the purchased item is listed in the backpack")], "F2")
case("Reset Password", "Account", [S("o20_forgot","Click Forgot Password on the login screen"), S("o20_email","Enter the account email"), S("o20_link","Open the reset link from the email"), S("o20_verify","Verify the new password works")])
case("Open Membership Page", "Shop", [LOGIN[0], S("o21_click","Click the membership banner"), S("o21_verify","Verify the membership benefits page loads"), S("o21_close","Close the membership page")])
case("Chat with Emotes", "Social", [LOGIN[0], S("o22_open","Open the emote wheel"), S("o22_select","Select the wave emote"), S("o22_verify","Verify nearby players see the emote")])
case("Report a Player", "Social", [LOGIN[1], S("o23_click","Click on another player"), S("o23_select","Select Report from the menu"), S("o23_verify","Verify the report confirmation message appears")])
case("Talk to Quest NPC", "Quests", [LOGIN[0], S("o24_walk","Walk up to the quest giver in Lamplight Town"), S("o24_click","Click the quest giver to start the dialog"), S("o24_verify","Verify the quest is added to the quest log")])
case("Collect Items in Shiverchill", "Quests", [LOGIN[0], S("map_open","Open the world map"), S("o25_travel","Travel to Shiverchill Mountains"), S("o25_collect","Collect three snowballs"), S("o25_verify","Verify the quest log shows the snowballs")])
case("Upgrade Spell", "Battle", [LOGIN[2], S("o26_open","Open the spellbook"), S("o26_select","Select the fire spell and click Upgrade"), S("o26_verify","Verify the spell level increases")])
case("Capture a firefly with the net", "Quests", [LOGIN[0], S("ff_travel","Travel to Firefly Forest on the map"), S("ff_net","Select the firefly net"), S("ff_catch","Click on a firefy to catch it"), S("ff_verify","Verify that the firefly is added to the collection")], "F4")
case("Complete Tutorial", None, [S("o27_create","Create a new test account"), S("o27_follow","Follow the tutorial arrows until the end"), S("o27_verify","Verify the tutorial reward is granted"), S("again_this","Do this again")])
case("View Pet List", "Pets", [LOGIN[0], S("pets_open","Open the pets menu"), S("o28_scroll","Scroll through the pet list"), S("o28_verify","Verify every owned pet is shown")])
case("Open Mailbox", None, [LOGIN[0], S("o29_click","Click the mailbox icon"), S("o29_open","Open the newest message"), S("o29_verify","Verify the message text is readable")])
case("Redeem Code", "Account", [LOGIN[0], S("settings_open","Open the settings menu"), S("o30_enter","Enter a valid code in the redeem field"), S("o30_verify","Verify the reward item is added to the backpack")])
case("Change Language", "Settings", [LOGIN[1], S("settings_open","Open the settings menu"), S("o3_select","Select Spanish from the language list"), S("o3_verify","Verify the menu text is shown in Spanish")])
case("Join Dance Party Event", "Events", [LOGIN[0], S("o31_banner","Click the event banner on the main menu"), S("o31_walk","Walk onto the dance floor"), S("o31_verify","Verify the character starts dancing with music playing")])

out = sys.argv[1]
os.makedirs(out, exist_ok=True)
nsteps = sum(len(c[2]) for c in cases)
print("cases", len(cases), "steps", nsteps, file=sys.stderr)
with open(f"{out}/corpus.jsonl","w") as f:
    for i,(name,typ,steps,fam) in enumerate(cases):
        rec = {"case_id": f"TC{i+1:02d}", "name": name}
        if typ: rec["type"] = typ
        rec["steps"] = [t for _,t in steps]
        f.write(json.dumps(rec) + "\n")
with open(f"{out}/step_ground_truth.csv","w", newline="") as f:
    w = csv.writer(f, lineterminator="\n"); w.writerow(["item_id","label"])
    for i,(name,typ,steps,fam) in enumerate(cases):
        for j,(lab,_) in enumerate(steps):
            w.writerow([f"TC{i+1:02d}.{j+1}", lab])
with open(f"{out}/case_ground_truth.csv","w", newline="") as f:
    w = csv.writer(f, lineterminator="\n"); w.writerow(["item_id","label"])
    for i,(name,typ,steps,fam) in enumerate(cases):
        w.writerow([f"TC{i+1:02d}", fam or f"solo{i+1:02d}"])
with open(f"{out}/corpus.csv","w", newline="") as f:
    w = csv.writer(f, lineterminator="\n"); w.writerow(["case_id","name","type","step_ordinal","step_text"])
    for i,(name,typ,steps,fam) in enumerate(cases):
        for j,(_,t) in enumerate(steps):
            w.writerow([f"TC{i+1:02d}", name, typ or "", j+1, t])
with open(f"{out}/misspellings.csv","w") as f:
    f.write("misspelled,fixed\nbackpak,backpack\nfirefy,firefly\nsetings,settings\n")
fams = {}
for i,(name,typ,steps,fam) in enumerate(cases):
    if fam: fams.setdefault(fam, []).append(f"TC{i+1:02d}")
print(json.dumps(fams), file=sys.stderr)
